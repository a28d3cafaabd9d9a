#pragma once

#include <cstdint>

#include "qtrack/noise.hpp"
#include "qtrack/omega.hpp"
#include "qtrack/quantizer.hpp"
#include "qtrack/types.hpp"

namespace qtrack {

// Expected weighted observation under the supplied estimate: the sum of
// weights[p] * [F(C_{p+1} - phi'th) - F(C_p - phi'th)] with the infinite
// end thresholds contributing exact CDF limits 0 and 1. Accumulated in
// ascending p for reproducibility. Always lies in
// [weights.back(), weights.front()].
double predicted_weight(ParamVec theta_hat, const Regressor& phi,
                        const QuantizerSpec& quantizer,
                        const NoiseModel& noise);

// squared norm of (theta_hat - theta_true)
inline double estimation_error(ParamVec theta_hat, ParamVec theta_true) {
    return (theta_hat - theta_true).norm_sq();
}

// Online stochastic-approximation identifier with projection:
//   theta_hat(k) = project(theta_hat(k-1) + phi(k)/k * (A(k) - s_bar))
// where A(k) is predicted_weight at theta_hat(k-1). One instance per trial.
class EstimatorState {
public:
    EstimatorState(ParamVec theta_hat0, OmegaSet omega,
                   QuantizerSpec quantizer, NoiseModel noise)
        : theta_hat_(theta_hat0), omega_(std::move(omega)),
          quantizer_(std::move(quantizer)), noise_(noise) {}

    // Consumes the step-k regressor and weighted observation; s_bar must be
    // one of the quantizer weights (throws
    // ValidationError("InvalidObservation") otherwise).
    void update(const Regressor& phi, double s_bar);

    ParamVec theta_hat() const { return theta_hat_; }
    std::int64_t step() const { return k_; } // next step to be consumed
    const OmegaSet& omega() const { return omega_; }
    const QuantizerSpec& quantizer() const { return quantizer_; }
    const NoiseModel& noise() const { return noise_; }

private:
    ParamVec theta_hat_;
    std::int64_t k_ = 1;
    OmegaSet omega_;
    QuantizerSpec quantizer_;
    NoiseModel noise_;
};

} // namespace qtrack
