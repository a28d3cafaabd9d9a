#include "qtrack/estimator.hpp"

#include <string>

#include "qtrack/errors.hpp"

namespace qtrack {

double predicted_weight(ParamVec theta_hat, const Regressor& phi,
                        const QuantizerSpec& quantizer,
                        const NoiseModel& noise) {
    double x = phi.dot(theta_hat);
    std::size_t m = quantizer.thresholds.size();
    double sum = 0.0;
    double cdf_lo = 0.0; // F(C_0 - x), C_0 = -inf
    for (std::size_t p = 0; p <= m; ++p) {
        double cdf_hi =
            (p == m) ? 1.0 : noise.cdf(quantizer.thresholds[p] - x);
        sum += quantizer.weights[p] * (cdf_hi - cdf_lo);
        cdf_lo = cdf_hi;
    }
    return sum;
}

void EstimatorState::update(const Regressor& phi, double s_bar) {
    bool known = false;
    for (double b : quantizer_.weights)
        if (s_bar == b) {
            known = true;
            break;
        }
    if (!known)
        throw ValidationError("InvalidObservation",
                              std::to_string(s_bar) +
                                  " is not a quantizer weight");

    double innovation =
        predicted_weight(theta_hat_, phi, quantizer_, noise_) - s_bar;
    double gain = 1.0 / static_cast<double>(k_);
    ParamVec raw{theta_hat_.c1 + phi.u_curr * gain * innovation,
                 theta_hat_.c2 + phi.u_prev * gain * innovation};
    theta_hat_ = omega_.project(raw);
    ++k_;
}

} // namespace qtrack
