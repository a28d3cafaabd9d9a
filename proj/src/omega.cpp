#include "qtrack/omega.hpp"

#include <algorithm>
#include <cmath>

#include "qtrack/errors.hpp"

namespace qtrack {

OmegaSet OmegaSet::box(double lo1, double hi1, double lo2, double hi2) {
    if (!(lo1 <= hi1) || !(lo2 <= hi2))
        throw ValidationError("InvalidBox", "need lo <= hi per coordinate");
    if (!std::isfinite(lo1) || !std::isfinite(hi1) || !std::isfinite(lo2) ||
        !std::isfinite(hi2))
        throw ValidationError("InvalidBox", "bounds must be finite");
    OmegaSet s;
    s.kind_ = Kind::Box;
    s.lo1_ = lo1;
    s.hi1_ = hi1;
    s.lo2_ = lo2;
    s.hi2_ = hi2;
    return s;
}

OmegaSet OmegaSet::signed_box(int sign, double theta_lower, double m_bar,
                              double theta_bar) {
    if (sign != 1 && sign != -1)
        throw ValidationError("InvalidBounds", "sign must be +1 or -1");
    if (!(0.0 < theta_bar && theta_bar < theta_lower && theta_lower <= m_bar))
        throw ValidationError("InvalidBounds",
                              "need 0 < theta_bar < theta_lower <= m_bar");
    OmegaSet s;
    s.kind_ = Kind::SignedBox;
    s.sign_ = sign;
    s.theta_lower_ = theta_lower;
    s.theta_bar_ = theta_bar;
    s.m_bar_ = m_bar;
    if (sign > 0) {
        s.lo1_ = theta_lower;
        s.hi1_ = m_bar;
    } else {
        s.lo1_ = -m_bar;
        s.hi1_ = -theta_lower;
    }
    s.lo2_ = -theta_bar;
    s.hi2_ = theta_bar;
    return s;
}

ParamVec OmegaSet::project(ParamVec x) const {
    return {std::clamp(x.c1, lo1_, hi1_), std::clamp(x.c2, lo2_, hi2_)};
}

bool OmegaSet::contains(ParamVec x) const {
    return lo1_ <= x.c1 && x.c1 <= hi1_ && lo2_ <= x.c2 && x.c2 <= hi2_;
}

double OmegaSet::sup_norm() const {
    if (kind_ == Kind::SignedBox) return *m_bar_;
    double a = std::max(std::fabs(lo1_), std::fabs(hi1_));
    double b = std::max(std::fabs(lo2_), std::fabs(hi2_));
    return std::sqrt(a * a + b * b);
}

double OmegaSet::min_abs_first() const {
    if (lo1_ <= 0.0 && 0.0 <= hi1_) return 0.0;
    return std::min(std::fabs(lo1_), std::fabs(hi1_));
}

double OmegaSet::max_abs_second() const {
    return std::max(std::fabs(lo2_), std::fabs(hi2_));
}

} // namespace qtrack
