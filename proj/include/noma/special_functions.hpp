#pragma once

namespace noma {

/// Euler-Mascheroni constant.
inline constexpr double kEulerGamma = 0.57721566490153286061;

/// Modified Bessel function of the second kind, order one.
///
/// Power series for x <= 2, Steed/Temme continued fraction above. Throws
/// std::domain_error for x <= 0 or NaN. Returns 0 once exp(-x) underflows
/// (x above roughly 745).
double bessel_k1(double x);

/// Exponential integral Ei(x) on the negative half-line, Ei(x) = -E1(-x).
///
/// Series for -1 <= x < 0, Lentz continued fraction for x < -1. Throws
/// std::domain_error for x >= 0 or NaN. Underflows to -0.0 for x below
/// roughly -745.
double expint_ei(double x);

/// exp(z) * E1(z) for z > 0, i.e. -exp(z) * Ei(-z) without overflow of the
/// exponential for large z.
double expint_e1_scaled(double z);

}  // namespace noma
