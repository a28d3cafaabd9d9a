#include "qtrack/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qtrack/errors.hpp"

namespace qtrack {

void validate_quantizer(const QuantizerSpec& spec) {
    if (spec.thresholds.empty() || spec.weights.empty())
        throw ValidationError("EmptyQuantizer",
                              "need at least one threshold and two weights");
    if (spec.weights.size() != spec.thresholds.size() + 1)
        throw ValidationError(
            "WeightCountMismatch",
            "expected " + std::to_string(spec.thresholds.size() + 1) +
                " weights, got " + std::to_string(spec.weights.size()));
    for (double c : spec.thresholds)
        if (!std::isfinite(c))
            throw ValidationError("NonAscendingThresholds",
                                  "thresholds must be finite");
    for (std::size_t i = 0; i + 1 < spec.thresholds.size(); ++i)
        if (!(spec.thresholds[i] < spec.thresholds[i + 1]))
            throw ValidationError("NonAscendingThresholds",
                                  "thresholds must be strictly increasing");
    for (double b : spec.weights)
        if (!std::isfinite(b))
            throw ValidationError("NonDecreasingWeights",
                                  "weights must be finite");
    for (std::size_t i = 0; i + 1 < spec.weights.size(); ++i)
        if (!(spec.weights[i] > spec.weights[i + 1]))
            throw ValidationError("NonDecreasingWeights",
                                  "weights must be strictly decreasing");
}

int quantize(const QuantizerSpec& spec, double y) {
    // bucket index = number of thresholds strictly below y
    auto it = std::lower_bound(spec.thresholds.begin(), spec.thresholds.end(),
                               y);
    return static_cast<int>(it - spec.thresholds.begin());
}

double weighted_observation(const QuantizerSpec& spec, int level) {
    if (level < 0 || static_cast<std::size_t>(level) >= spec.weights.size())
        throw ValidationError("LevelOutOfRange",
                              "level " + std::to_string(level) +
                                  " outside 0.." +
                                  std::to_string(spec.weights.size() - 1));
    return spec.weights[static_cast<std::size_t>(level)];
}

QuantizerSpec quantizer_preset(const std::string& name) {
    if (name == "paper")
        return QuantizerSpec{{-2.0, 0.0, 2.0}, {80.0, 50.0, -50.0, -80.0}};
    throw ValidationError("UnknownPreset",
                          "no quantizer preset named '" + name + "'");
}

} // namespace qtrack
