#include "qtrack/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "qtrack/errors.hpp"

namespace qtrack {

std::string rate_class_name(RateClass rc) {
    switch (rc) {
    case RateClass::OneOverK:
        return "one_over_k";
    case RateClass::LogKOverK:
        return "log_k_over_k";
    case RateClass::Power:
        return "power";
    }
    return "?";
}

double lambda_min_2x2(double a, double b, double c) {
    double mean = 0.5 * (a + c);
    double half_gap = 0.5 * (a - c);
    return mean - std::sqrt(half_gap * half_gap + b * b);
}

double check_reference_excitation(const RealizedReference& ref, int h,
                                  std::int64_t horizon) {
    if (h <= 2)
        throw ValidationError("WindowTooShort",
                              "excitation window needs h > 2");
    if (horizon < h)
        throw ValidationError("WindowTooShort",
                              "horizon shorter than one window");
    double worst = std::numeric_limits<double>::infinity();
    for (std::int64_t k = 1; k <= horizon - h + 1; ++k) {
        double a = 0.0, b = 0.0, c = 0.0;
        for (std::int64_t i = k + 1; i <= k + h - 1; ++i) {
            double y1 = ref.at(i);
            double y0 = ref.at(i - 1);
            a += y1 * y1;
            b += y1 * y0;
            c += y0 * y0;
        }
        worst = std::min(worst, lambda_min_2x2(a, b, c));
    }
    return worst;
}

double density_floor(const NoiseModel& noise, double range) {
    return noise.pdf(range);
}

namespace {

void fill_certified(ProblemConstants& pc, const QuantizerSpec& quantizer,
                    const NoiseModel& noise) {
    double th_lo = *pc.theta_lower;
    double th_bar = *pc.theta_bar;
    double m = std::sqrt(2.0) * pc.y_bar / (th_lo - th_bar);
    pc.input_bound = m;
    double cmax = std::max(std::fabs(quantizer.thresholds.front()),
                           std::fabs(quantizer.thresholds.back()));
    pc.density_range = cmax + m * pc.m_bar;
    pc.density_floor_value = density_floor(noise, *pc.density_range);
    double zeta = 2.0 * quantizer.weight_spread() * pc.excitation_delta *
                  (*pc.density_floor_value) / pc.h;
    pc.rate_exponent = zeta;
    if (zeta > 1.0)
        pc.rate_class = RateClass::OneOverK;
    else if (zeta == 1.0)
        pc.rate_class = RateClass::LogKOverK;
    else
        pc.rate_class = RateClass::Power;
}

ProblemConstants base_constants(double y_bar, int h, double delta_y,
                                double m_bar) {
    if (h <= 2)
        throw ValidationError("WindowTooShort",
                              "excitation window needs h > 2");
    ProblemConstants pc;
    pc.y_bar = y_bar;
    pc.h = h;
    pc.delta_y = delta_y;
    pc.m_bar = m_bar;
    pc.excitation_delta = delta_y / (4.0 * (h - 1) * m_bar * m_bar);
    return pc;
}

} // namespace

ProblemConstants derive_constants(double y_bar, int h, double delta_y,
                                  double theta_lower, double theta_bar,
                                  double m_bar, const QuantizerSpec& quantizer,
                                  const NoiseModel& noise) {
    if (!(0.0 < theta_bar && theta_bar < theta_lower && theta_lower <= m_bar))
        throw ValidationError("InvalidBounds",
                              "need 0 < theta_bar < theta_lower <= m_bar");
    ProblemConstants pc = base_constants(y_bar, h, delta_y, m_bar);
    pc.theta_lower = theta_lower;
    pc.theta_bar = theta_bar;
    pc.certified = true;
    fill_certified(pc, quantizer, noise);
    return pc;
}

ProblemConstants derive_constants_for(const OmegaSet& omega, double y_bar,
                                      int h, double delta_y,
                                      const QuantizerSpec& quantizer,
                                      const NoiseModel& noise) {
    ProblemConstants pc = base_constants(y_bar, h, delta_y, omega.sup_norm());
    double th_lo = omega.min_abs_first();
    double th_bar = omega.max_abs_second();
    pc.theta_lower = th_lo;
    pc.theta_bar = th_bar;
    pc.certified = 0.0 < th_bar && th_bar < th_lo && th_lo <= pc.m_bar;
    if (pc.certified) fill_certified(pc, quantizer, noise);
    return pc;
}

} // namespace qtrack
