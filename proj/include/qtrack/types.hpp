#pragma once

#include <algorithm>
#include <cmath>

namespace qtrack {

// Two-dimensional parameter vector: true parameter, estimates, and their
// difference all live here. c1 multiplies u(k), c2 multiplies u(k-1).
struct ParamVec {
    double c1 = 0.0;
    double c2 = 0.0;

    friend ParamVec operator+(ParamVec a, ParamVec b) {
        return {a.c1 + b.c1, a.c2 + b.c2};
    }
    friend ParamVec operator-(ParamVec a, ParamVec b) {
        return {a.c1 - b.c1, a.c2 - b.c2};
    }
    friend bool operator==(ParamVec a, ParamVec b) {
        return a.c1 == b.c1 && a.c2 == b.c2;
    }
    double norm() const { return std::sqrt(c1 * c1 + c2 * c2); }
    double norm_sq() const { return c1 * c1 + c2 * c2; }
    bool finite() const { return std::isfinite(c1) && std::isfinite(c2); }
};

// Regressor [u(k), u(k-1)]; u(s) = 0 for s <= 0.
struct Regressor {
    double u_curr = 0.0;
    double u_prev = 0.0;

    double dot(ParamVec theta) const {
        return u_curr * theta.c1 + u_prev * theta.c2;
    }
    double norm() const {
        return std::sqrt(u_curr * u_curr + u_prev * u_prev);
    }
};

// min over |w| <= 1 of |theta.c1 + theta.c2 * w|. The minimum-phase
// requirement holds iff this margin exceeds the chosen mu; it is positive
// iff |c1| > |c2|.
inline double min_phase_margin(ParamVec theta) {
    return std::max(0.0, std::fabs(theta.c1) - std::fabs(theta.c2));
}

} // namespace qtrack
