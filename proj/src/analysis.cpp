#include "noma/analysis.hpp"

#include "noma/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace noma {

namespace {
constexpr double kLn2 = std::numbers::ln2;
// exp(-700) is the smallest factor kept before treating a term as zero.
constexpr double kUnderflowExponent = 700.0;

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }
}  // namespace

double AnalysisParams::varsigma_sq() const {
  const double s = varsigma(alloc);
  return s * s;
}

double AnalysisParams::xi() const { return std::sqrt(1.0 / (varsigma_sq() * variances.alpha_rd)); }

double AnalysisParams::phi1() const {
  return std::sqrt(varsigma_sq() * variances.alpha_sd / (alloc.a2 * alloc.a4));
}

double AnalysisParams::gamma_coeff() const {
  return std::sqrt(alloc.a1 * alloc.a3 / (variances.alpha_sd * variances.alpha_rd)) /
         varsigma_sq();
}

double AnalysisParams::eta() const {
  const auto& v = variances;
  const double dest = (alloc.a1 * v.alpha_sd + alloc.a3 * v.alpha_rd) /
                      (varsigma_sq() * v.alpha_sd * v.alpha_rd);
  return (dest + 1.0 / (alloc.a2 * v.alpha_sr)) / snr.rho;
}

double AnalysisParams::x1_rate_coeff() const {
  return (alloc.a2 / variances.alpha_rd + alloc.a4 / variances.alpha_sd) /
         (varsigma_sq() * snr.rho);
}

double ccdf_x_highsnr(double x, const AnalysisParams& p) {
  if (x >= p.relay_ceiling()) return 0.0;
  if (x <= 0.0) return 1.0;
  const double s2 = p.varsigma_sq();
  const double rho = p.snr.rho;
  const double xi = p.xi();
  const double phi1 = p.phi1();
  const double prefactor = 2.0 * x / (s2 * rho * xi * phi1 * p.variances.alpha_rd);
  const double decay = std::exp(-p.x1_rate_coeff() * x);
  return clamp_unit(prefactor * decay * bessel_k1(2.0 * xi * x / (rho * phi1)));
}

double ccdf_x_exact(double x, const AnalysisParams& p, const QuadratureOptions& opts) {
  if (x <= 0.0) return 1.0;
  const auto& a = p.alloc;
  const auto& v = p.variances;
  const double rho = p.snr.rho;
  const double margin = a.a1 - a.a2 * x;
  if (margin <= 0.0) return 0.0;
  const double relay_exponent = x / (margin * rho * v.alpha_sr);
  if (relay_exponent > kUnderflowExponent) return 0.0;

  // P(dest > x) = (1/alpha_RD) int_{th}^inf exp(-a4 u x / ((s2 rho u - a2 x) alpha_SD) - u/alpha_RD) du.
  // With u = th + g the exponent is K/g + g/alpha_RD + c0; integrating over
  // s = ln g keeps the essential singularity at g = 0 smooth.
  const double s2rho = p.varsigma_sq() * rho;
  const double threshold = a.a2 * x / s2rho;
  const double k = a.a4 * x * threshold / (s2rho * v.alpha_sd);
  const double c0 = a.a4 * x / (s2rho * v.alpha_sd) + threshold / v.alpha_rd;
  auto integrand = [&](double s) {
    const double g = std::exp(s);
    const double e = k / g + g / v.alpha_rd + c0 - s;
    return e > kUnderflowExponent + 50.0 ? 0.0 : std::exp(-e);
  };
  const double saddle = std::log(std::sqrt(k * v.alpha_rd));
  const double s_lo = std::min(saddle, std::log(v.alpha_rd)) - 40.0;
  const double s_hi = std::max(std::log(v.alpha_rd * 800.0), saddle + 10.0);
  const double dest = (integrate(integrand, s_lo, saddle, opts) + integrate(integrand, saddle, s_hi, opts)) /
                      v.alpha_rd;
  return clamp_unit(std::exp(-relay_exponent) * dest);
}

double ccdf_y(double y, const AnalysisParams& p) {
  if (y <= 0.0) return 1.0;
  const double rho = p.snr.rho;
  const double z = 2.0 * p.gamma_coeff() * y / rho;
  const double rate = p.eta() * rho;
  const double decay_exponent = rate * y / rho;
  if (decay_exponent > kUnderflowExponent) return 0.0;
  return clamp_unit(z * std::exp(-decay_exponent) * bessel_k1(z));
}

double rate_x1_semianalytic(const AnalysisParams& p, const QuadratureOptions& opts) {
  const double ceiling = p.relay_ceiling();
  auto correction = [&](double x) { return (1.0 - ccdf_x_highsnr(x, p)) / (1.0 + x); };
  const double integral = integrate(correction, 0.0, ceiling, opts);
  return std::max(0.0, half_log2_1p(ceiling) - integral / (2.0 * kLn2));
}

double rate_x1_approx(const AnalysisParams& p) {
  const double c = p.x1_rate_coeff();
  const double bracket = expint_ei(-p.relay_ceiling() * c) - expint_ei(-c);
  return std::max(0.0, std::exp(c) / (2.0 * kLn2) * bracket);
}

double rate_x2_from_eta(double eta) { return expint_e1_scaled(eta) / (2.0 * kLn2); }

double rate_x2_closed(const AnalysisParams& p) { return rate_x2_from_eta(p.eta()); }

double ergodic_sr_closed(const AnalysisParams& p) { return rate_x1_approx(p) + rate_x2_closed(p); }

double highsnr_allocation_term(double a1, double a3, const ChannelVariances& v) {
  const double a2 = 1.0 - a1;
  const double s = std::sqrt(a1 * (1.0 - a3)) + std::sqrt(a2 * a3);
  const double s2 = s * s;
  const double sdrd = v.alpha_sd * v.alpha_rd;
  const double num = a1 * s2 * sdrd * v.alpha_sr;
  const double den = a2 * v.alpha_sr * (a1 * v.alpha_sd + a3 * v.alpha_rd) + s2 * sdrd;
  return 0.5 * std::log2(num / den) - kEulerGamma / (2.0 * kLn2);
}

double ergodic_sr_highsnr(const AnalysisParams& p) {
  return highsnr_allocation_term(p.alloc.a1, p.alloc.a3, p.variances) + 0.5 * std::log2(p.snr.rho);
}

}  // namespace noma
