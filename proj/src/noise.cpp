#include "qtrack/noise.hpp"

#include <cmath>

#include "qtrack/errors.hpp"
#include "qtrack/math.hpp"

namespace qtrack {

NoiseModel NoiseModel::gaussian(double sigma) {
    if (!(sigma > 0.0))
        throw ValidationError("InvalidNoiseScale", "sigma must be > 0");
    return NoiseModel(NoiseKind::Gaussian, sigma);
}

NoiseModel NoiseModel::logistic(double scale) {
    if (!(scale > 0.0))
        throw ValidationError("InvalidNoiseScale", "scale must be > 0");
    return NoiseModel(NoiseKind::Logistic, scale);
}

NoiseModel NoiseModel::uniform(double half_width) {
    if (!(half_width > 0.0))
        throw ValidationError("InvalidNoiseScale", "half_width must be > 0");
    return NoiseModel(NoiseKind::Uniform, half_width);
}

NoiseModel NoiseModel::zero() { return NoiseModel(NoiseKind::Zero, 0.0); }

double NoiseModel::cdf(double x) const {
    switch (kind_) {
    case NoiseKind::Gaussian:
        return normal_cdf(x / scale_);
    case NoiseKind::Logistic:
        return 1.0 / (1.0 + std::exp(-x / scale_));
    case NoiseKind::Uniform: {
        if (x <= -scale_) return 0.0;
        if (x >= scale_) return 1.0;
        return (x + scale_) / (2.0 * scale_);
    }
    case NoiseKind::Zero:
        return x < 0.0 ? 0.0 : 1.0;
    }
    return 0.0;
}

double NoiseModel::pdf(double x) const {
    switch (kind_) {
    case NoiseKind::Gaussian:
        return normal_pdf(x / scale_) / scale_;
    case NoiseKind::Logistic: {
        double t = std::exp(-std::fabs(x) / scale_);
        double d = 1.0 + t;
        return t / (scale_ * d * d);
    }
    case NoiseKind::Uniform:
        return std::fabs(x) <= scale_ ? 1.0 / (2.0 * scale_) : 0.0;
    case NoiseKind::Zero:
        return 0.0;
    }
    return 0.0;
}

double NoiseModel::variance() const {
    switch (kind_) {
    case NoiseKind::Gaussian:
        return scale_ * scale_;
    case NoiseKind::Logistic:
        return scale_ * scale_ * 3.289868133696452873; // pi^2 / 3
    case NoiseKind::Uniform:
        return scale_ * scale_ / 3.0;
    case NoiseKind::Zero:
        return 0.0;
    }
    return 0.0;
}

double NoiseModel::sample(const TrialStream& stream,
                          std::uint64_t step) const {
    switch (kind_) {
    case NoiseKind::Gaussian:
        return scale_ * stream.gaussian(step);
    case NoiseKind::Logistic: {
        double u = stream.uniform_open(step, 0);
        return scale_ * std::log(u / (1.0 - u));
    }
    case NoiseKind::Uniform:
        return scale_ * (2.0 * stream.uniform01(step, 0) - 1.0);
    case NoiseKind::Zero:
        return 0.0;
    }
    return 0.0;
}

} // namespace qtrack
