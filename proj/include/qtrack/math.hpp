#pragma once

namespace qtrack {

// Rational Chebyshev approximations to erf/erfc (three-branch scheme after
// W. J. Cody, Math. Comp. 1969). Absolute error is far below the 1e-7 the
// library requires of its normal CDF; tests pin it against a quadrature
// oracle.
double erf_approx(double x);
double erfc_approx(double x);

// Standard normal CDF/PDF built on the approximations above.
double normal_cdf(double x);
double normal_pdf(double x);

} // namespace qtrack
