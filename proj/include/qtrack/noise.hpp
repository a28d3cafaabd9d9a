#pragma once

#include <cstdint>

#include "qtrack/rng.hpp"

namespace qtrack {

enum class NoiseKind {
    Gaussian, // N(0, sigma^2), scale = sigma
    Logistic, // logistic with scale parameter
    Uniform,  // uniform on [-scale, scale]
    Zero,     // degenerate at 0; test-only, fails density assumptions
};

// Zero-mean noise law with known CDF/PDF and a deterministic per-step
// sampler. Immutable once built; share freely across trial workers.
class NoiseModel {
public:
    static NoiseModel gaussian(double sigma);
    static NoiseModel logistic(double scale);
    static NoiseModel uniform(double half_width);
    static NoiseModel zero();

    double cdf(double x) const;
    double pdf(double x) const;
    double variance() const;
    double sample(const TrialStream& stream, std::uint64_t step) const;

    NoiseKind kind() const { return kind_; }
    double scale() const { return scale_; }

private:
    NoiseModel(NoiseKind kind, double scale) : kind_(kind), scale_(scale) {}

    NoiseKind kind_;
    double scale_;
};

} // namespace qtrack
