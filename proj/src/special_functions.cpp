#include "noma/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace noma {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIter = 10000;

constexpr double kK1Switch = 2.0;
constexpr double kE1Switch = 1.0;

// K1(x) = 1/x + ln(x/2) I1(x) - (x/4) sum_k [psi(k+1) + psi(k+2)] q^k / (k!(k+1)!),
// q = x^2/4. Both sums share the q^k / (k!(k+1)!) weight.
double k1_series(double x) {
  const double q = 0.25 * x * x;
  const double log_half = std::log(0.5 * x);
  double weight = 1.0;                 // q^k / (k! (k+1)!)
  double psi_k1 = -kEulerGamma;        // psi(k+1)
  double psi_k2 = 1.0 - kEulerGamma;   // psi(k+2)
  double sum = 0.0;
  for (int k = 0; k < kMaxIter; ++k) {
    const double term = weight * (log_half - 0.5 * (psi_k1 + psi_k2));
    sum += term;
    if (std::abs(term) <= kEps * std::abs(sum) && k > 0) break;
    weight *= q / ((k + 1.0) * (k + 2.0));
    psi_k1 += 1.0 / (k + 1.0);
    psi_k2 += 1.0 / (k + 2.0);
  }
  return 1.0 / x + 0.5 * x * sum;
}

// Temme's CF2 with Steed's algorithm at order mu = 0, yielding K0 and K1.
double k1_continued_fraction(double x) {
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i <= kMaxIter; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  h *= a1;
  const double k0 = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
  return k0 * (x + 0.5 - h) / x;
}

// E1(z) = -gamma - ln z - sum_{k>=1} (-z)^k / (k k!)
double e1_series(double z) {
  double sum = 0.0;
  double fact = 1.0;
  for (int k = 1; k < kMaxIter; ++k) {
    fact *= -z / k;
    const double term = fact / k;
    sum += term;
    if (std::abs(term) <= kEps * std::abs(sum)) break;
  }
  return -kEulerGamma - std::log(z) - sum;
}

// Modified Lentz evaluation of exp(z) E1(z) for z > 1.
double e1_scaled_continued_fraction(double z) {
  constexpr double tiny = 1e-300;
  double b = z + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) <= kEps) break;
  }
  return h;
}

}  // namespace

double bessel_k1(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("bessel_k1: argument must be positive, got " + std::to_string(x));
  }
  if (std::isinf(x)) return 0.0;
  return x <= kK1Switch ? k1_series(x) : k1_continued_fraction(x);
}

double expint_e1_scaled(double z) {
  if (!(z > 0.0)) {
    throw std::domain_error("expint_e1_scaled: argument must be positive, got " + std::to_string(z));
  }
  if (z <= kE1Switch) return std::exp(z) * e1_series(z);
  return e1_scaled_continued_fraction(z);
}

double expint_ei(double x) {
  if (!(x < 0.0)) {
    throw std::domain_error("expint_ei: argument must be negative, got " + std::to_string(x));
  }
  const double z = -x;
  if (std::isinf(z)) return -0.0;
  if (z <= kE1Switch) return -e1_series(z);
  return -e1_scaled_continued_fraction(z) * std::exp(-z);
}

}  // namespace noma
