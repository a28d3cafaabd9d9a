#include "qtrack/math.hpp"

#include <cmath>

namespace qtrack {
namespace {

// Coefficients from Cody's rational Chebyshev fits (netlib specfun).
constexpr double kA[5] = {3.1611237438705656, 113.864154151050156,
                          377.485237685302021, 3209.37758913846947,
                          0.185777706184603153};
constexpr double kB[4] = {23.6012909523441209, 244.024637934444173,
                          1282.61652607737228, 2844.23683343917062};
constexpr double kC[9] = {0.564188496988670089, 8.88314979438837594,
                          66.1191906371416295,  298.635138197400131,
                          881.95222124176909,   1712.04761263407058,
                          2051.07837782607147,  1230.33935479799725,
                          2.15311535474403846e-8};
constexpr double kD[8] = {15.7449261107098347, 117.693950891312499,
                          537.181101862009858, 1621.38957456669019,
                          3290.79923573345963, 4362.61909014324716,
                          3439.36767414372164, 1230.33935480374942};
constexpr double kP[6] = {0.305326634961232344, 0.360344899949804439,
                          0.125781726111229246, 0.0160837851487422766,
                          6.58749161529837803e-4, 0.0163153871373020978};
constexpr double kQ[5] = {2.56852019228982242, 1.87295284992346047,
                          0.527905102951428412, 0.0605183413124413191,
                          0.00233520497626869185};

constexpr double kInvSqrtPi = 0.56418958354775628695;
constexpr double kThresh = 0.46875;
constexpr double kXBig = 26.543;    // erfc underflows to 0 beyond this
constexpr double kXSmall = 1.11e-16;

// erfc(y) for y in [kThresh, 4].
double erfc_mid(double y) {
    double num = kC[8] * y;
    double den = y;
    for (int i = 0; i < 7; ++i) {
        num = (num + kC[i]) * y;
        den = (den + kD[i]) * y;
    }
    double r = (num + kC[7]) / (den + kD[7]);
    // exp(-y^2) split to preserve accuracy for large y
    double ysq = std::trunc(y * 16.0) / 16.0;
    double del = (y - ysq) * (y + ysq);
    return std::exp(-ysq * ysq) * std::exp(-del) * r;
}

// erfc(y) for y > 4.
double erfc_tail(double y) {
    if (y >= kXBig) return 0.0;
    double ysq = 1.0 / (y * y);
    double num = kP[5] * ysq;
    double den = ysq;
    for (int i = 0; i < 4; ++i) {
        num = (num + kP[i]) * ysq;
        den = (den + kQ[i]) * ysq;
    }
    double r = ysq * (num + kP[4]) / (den + kQ[4]);
    r = (kInvSqrtPi - r) / y;
    double yt = std::trunc(y * 16.0) / 16.0;
    double del = (y - yt) * (y + yt);
    return std::exp(-yt * yt) * std::exp(-del) * r;
}

// erf(x) for |x| <= kThresh.
double erf_small(double x) {
    double ysq = 0.0;
    if (std::fabs(x) > kXSmall) ysq = x * x;
    double num = kA[4] * ysq;
    double den = ysq;
    for (int i = 0; i < 3; ++i) {
        num = (num + kA[i]) * ysq;
        den = (den + kB[i]) * ysq;
    }
    return x * (num + kA[3]) / (den + kB[3]);
}

} // namespace

double erf_approx(double x) {
    double y = std::fabs(x);
    if (y <= kThresh) return erf_small(x);
    double c = (y <= 4.0) ? erfc_mid(y) : erfc_tail(y);
    double r = (0.5 - c) + 0.5;
    return x < 0.0 ? -r : r;
}

double erfc_approx(double x) {
    double y = std::fabs(x);
    double r;
    if (y <= kThresh) {
        r = 1.0 - erf_small(y);
    } else if (y <= 4.0) {
        r = erfc_mid(y);
    } else {
        r = erfc_tail(y);
    }
    return x < 0.0 ? 2.0 - r : r;
}

double normal_cdf(double x) {
    // Phi(x) = erfc(-x / sqrt(2)) / 2
    return 0.5 * erfc_approx(-x * 0.7071067811865475244);
}

double normal_pdf(double x) {
    constexpr double kInvSqrt2Pi = 0.3989422804014326779;
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

} // namespace qtrack
