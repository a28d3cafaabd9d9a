#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qtrack/noise.hpp"
#include "qtrack/omega.hpp"
#include "qtrack/quantizer.hpp"
#include "qtrack/reference.hpp"

namespace qtrack {

// Convergence-rate regime selected by comparing the rate exponent with 1.
enum class RateClass { OneOverK, LogKOverK, Power };

std::string rate_class_name(RateClass rc);

// Smallest eigenvalue of the symmetric matrix [[a, b], [b, c]].
double lambda_min_2x2(double a, double b, double c);

// Worst-case excitation of the reference over horizon K: the minimum over
// window starts k in [1, K-h+1] of the smallest eigenvalue of
// sum_{i=k+1}^{k+h-1} Y(i) Y(i)' with Y(i) = [y*(i), y*(i-1)]'. The
// excitation assumption holds on the horizon iff the result is positive.
// Throws ValidationError("WindowTooShort") for h <= 2.
double check_reference_excitation(const RealizedReference& ref, int h,
                                  std::int64_t horizon);

// Minimum of the noise density on [-range, range]. All shipped noise kinds
// are symmetric and unimodal, so this is pdf(range).
double density_floor(const NoiseModel& noise, double range);

// Everything the convergence statements quantify over, computed in closed
// form from the problem data.
struct ProblemConstants {
    double y_bar = 0.0;   // reference bound
    int h = 3;            // excitation window constant
    double delta_y = 0.0; // reference excitation level (given or measured)
    double m_bar = 0.0;   // parameter-set norm cap

    // Bounds backing the input-boundedness argument; absent when the
    // parameter set does not pin them down.
    std::optional<double> theta_lower;
    std::optional<double> theta_bar;
    bool certified = false; // 0 < theta_bar < theta_lower <= m_bar held

    double excitation_delta = 0.0; // delta_y / (4 (h-1) m_bar^2)

    // Populated only when certified:
    std::optional<double> input_bound;   // sqrt(2) y_bar / (th_lo - th_bar)
    std::optional<double> density_range; // max(|C_m|,|C_1|) + M m_bar
    std::optional<double> density_floor_value;
    std::optional<double> rate_exponent; // 2 (b0 - bm) delta f* / h
    std::optional<RateClass> rate_class;
};

// Explicit-bounds entry point; throws ValidationError("InvalidBounds")
// unless 0 < theta_bar < theta_lower <= m_bar.
ProblemConstants derive_constants(double y_bar, int h, double delta_y,
                                  double theta_lower, double theta_bar,
                                  double m_bar, const QuantizerSpec& quantizer,
                                  const NoiseModel& noise);

// Derives the bounds from the parameter set instead; when they fail the
// ordering requirement the dependent constants are left unset rather than
// throwing, so ill-posed-but-runnable setups can still be reported on.
ProblemConstants derive_constants_for(const OmegaSet& omega, double y_bar,
                                      int h, double delta_y,
                                      const QuantizerSpec& quantizer,
                                      const NoiseModel& noise);

// One row of the assumption-check report.
struct AssumptionRow {
    std::string name;
    std::string status; // "pass" | "fail" | "not-certifiable"
    std::string detail;
};

struct AssumptionReport {
    std::vector<AssumptionRow> rows;
    ProblemConstants constants;
    bool hard_failure = false;
};

} // namespace qtrack
