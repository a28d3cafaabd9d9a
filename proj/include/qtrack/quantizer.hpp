#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace qtrack {

// Multi-threshold sensor: finite thresholds C_1 < ... < C_m partition the
// real line into m+1 buckets (C_p, C_{p+1}] with conceptual C_0 = -inf,
// C_{m+1} = +inf. weights[p] is the strictly decreasing readout attached to
// bucket p.
struct QuantizerSpec {
    std::vector<double> thresholds;
    std::vector<double> weights;

    std::size_t levels() const { return weights.size(); } // m + 1
    double weight_spread() const { return weights.front() - weights.back(); }
};

// Throws ValidationError naming the violated invariant:
// EmptyQuantizer, WeightCountMismatch, NonAscendingThresholds,
// NonDecreasingWeights.
void validate_quantizer(const QuantizerSpec& spec);

// Bucket index p in {0..m} with C_p < y <= C_{p+1}; intervals are closed on
// the right, so y exactly on a finite threshold maps to the bucket below.
int quantize(const QuantizerSpec& spec, double y);

// weights[level]; throws ValidationError("LevelOutOfRange") for level > m.
double weighted_observation(const QuantizerSpec& spec, int level);

// Named quantizer presets for the CLI; "paper" is the four-level sensor
// (thresholds -2, 0, 2; weights 80, 50, -50, -80) used by the bundled
// example configs. Throws ValidationError("UnknownPreset") otherwise.
QuantizerSpec quantizer_preset(const std::string& name);

} // namespace qtrack
