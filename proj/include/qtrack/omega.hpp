#pragma once

#include <optional>

#include "qtrack/types.hpp"

namespace qtrack {

// Convex compact projection domain for the estimator. Two variants, both
// axis-aligned with closed-form Euclidean projection:
//   Box       - [lo1, hi1] x [lo2, hi2]
//   SignedBox - first coordinate magnitude in [theta_lower, m_bar] with a
//               fixed sign, second coordinate magnitude <= theta_bar. This
//               is the construction that makes the closed loop provably
//               bounded and excited.
class OmegaSet {
public:
    enum class Kind { Box, SignedBox };

    static OmegaSet box(double lo1, double hi1, double lo2, double hi2);
    static OmegaSet signed_box(int sign, double theta_lower, double m_bar,
                               double theta_bar);

    ParamVec project(ParamVec x) const;
    bool contains(ParamVec x) const;

    Kind kind() const { return kind_; }
    double lo1() const { return lo1_; }
    double hi1() const { return hi1_; }
    double lo2() const { return lo2_; }
    double hi2() const { return hi2_; }

    // sup over the set of the Euclidean norm (box) or the stored first-
    // coordinate cap (signed box).
    double sup_norm() const;
    // min over the set of |first coordinate|; 0 when the set straddles 0.
    double min_abs_first() const;
    // max over the set of |second coordinate|.
    double max_abs_second() const;

    // Signed-box parameters when that variant was used.
    std::optional<double> theta_lower() const { return theta_lower_; }
    std::optional<double> theta_bar() const { return theta_bar_; }
    std::optional<double> m_bar() const { return m_bar_; }
    int sign() const { return sign_; }

private:
    OmegaSet() = default;

    Kind kind_ = Kind::Box;
    // Both variants are stored as their bounding intervals; projection is
    // coordinate-wise clamping.
    double lo1_ = 0, hi1_ = 0, lo2_ = 0, hi2_ = 0;
    int sign_ = +1;
    std::optional<double> theta_lower_, theta_bar_, m_bar_;
};

// Euclidean projection onto omega; free-function spelling of
// omega.project(x).
inline ParamVec project(const OmegaSet& omega, ParamVec x) {
    return omega.project(x);
}

} // namespace qtrack
