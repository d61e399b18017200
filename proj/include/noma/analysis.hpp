#pragma once

#include "noma/channel.hpp"
#include "noma/link.hpp"
#include "noma/quadrature.hpp"

namespace noma {

/// Operating point for the analytical expressions. Derived coefficients are
/// computed on demand.
struct AnalysisParams {
  PowerAllocation alloc;
  ChannelVariances variances;
  SnrPoint snr;

  double varsigma_sq() const;
  /// sqrt(1 / (varsigma^2 alpha_RD))
  double xi() const;
  /// sqrt(varsigma^2 alpha_SD / (a2 a4))
  double phi1() const;
  /// (1/varsigma^2) sqrt(a1 a3 / (alpha_SD alpha_RD)), the Bessel argument
  /// coefficient in the CCDF of Y.
  double gamma_coeff() const;
  /// ((a1 alpha_SD + a3 alpha_RD)/(varsigma^2 alpha_SD alpha_RD) + 1/(a2 alpha_SR)) / rho
  double eta() const;
  /// (a2/alpha_RD + a4/alpha_SD) / (varsigma^2 rho), the exponential rate of
  /// the high-SNR CCDF of X.
  double x1_rate_coeff() const;
  /// a1 / a2, the high-SNR ceiling of the relay SINR for x1.
  double relay_ceiling() const { return alloc.a1 / alloc.a2; }
};

/// CCDF of X = min(gamma_D^(x1), gamma_R^(x1)) with the relay SINR replaced by
/// its a1/a2 ceiling: a Bessel-K1 form on [0, a1/a2), zero beyond.
double ccdf_x_highsnr(double x, const AnalysisParams& p);

/// Exact CCDF of X by quadrature over beta_RD, including the finite-SNR relay
/// term. Throws QuadratureError on non-convergence.
double ccdf_x_exact(double x, const AnalysisParams& p, const QuadratureOptions& opts = {});

/// CCDF of Y = min(gamma_D^(x2), gamma_R^(x2)) on the unnormalized SNR scale.
double ccdf_y(double y, const AnalysisParams& p);

/// Ergodic rate of x1 by quadrature of the high-SNR CCDF of X.
double rate_x1_semianalytic(const AnalysisParams& p, const QuadratureOptions& opts = {});

/// Exponential-integral form of the x1 rate (K1 small-argument limit). Its
/// high-SNR limit is 1/2 log2(a1/a2), not 1/2 log2(1 + a1/a2).
double rate_x1_approx(const AnalysisParams& p);

/// -exp(eta) Ei(-eta) / (2 ln 2)
double rate_x2_from_eta(double eta);
double rate_x2_closed(const AnalysisParams& p);

/// rate_x1_approx + rate_x2_closed.
double ergodic_sr_closed(const AnalysisParams& p);

/// Affine-in-log2(rho) high-SNR expansion of the closed-form sum rate.
double ergodic_sr_highsnr(const AnalysisParams& p);

/// The allocation-dependent part of ergodic_sr_highsnr (rho = 1), in bits.
double highsnr_allocation_term(double a1, double a3, const ChannelVariances& v);

}  // namespace noma
