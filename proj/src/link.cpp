#include "noma/link.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace noma {

namespace {
bool open_unit(double a) { return std::isfinite(a) && a > 0.0 && a < 1.0; }
}  // namespace

PowerAllocation PowerAllocation::relaxed(double a1, double a3) {
  if (!open_unit(a1) || !open_unit(a3)) {
    std::ostringstream msg;
    msg << "power allocation factors must lie in (0, 1): a1=" << a1 << ", a3=" << a3;
    throw std::invalid_argument(msg.str());
  }
  return PowerAllocation{a1, 1.0 - a1, a3, 1.0 - a3};
}

PowerAllocation PowerAllocation::make(double a1, double a3) {
  auto alloc = relaxed(a1, a3);
  if (!alloc.sic_ordered()) {
    std::ostringstream msg;
    msg << "a1=" << a1 << " must exceed a2=" << alloc.a2
        << " so that x1 is decoded first by SIC";
    throw std::invalid_argument(msg.str());
  }
  return alloc;
}

SnrPoint SnrPoint::from_db(double db) {
  if (!std::isfinite(db)) throw std::invalid_argument("SNR in dB must be finite");
  return SnrPoint{std::pow(10.0, db / 10.0), db};
}

SnrPoint SnrPoint::from_linear(double rho) {
  if (!std::isfinite(rho) || !(rho > 0.0)) throw std::invalid_argument("linear SNR must be positive");
  return SnrPoint{rho, 10.0 * std::log10(rho)};
}

double varsigma(const PowerAllocation& alloc) {
  return std::sqrt(alloc.a1 * alloc.a4) + std::sqrt(alloc.a2 * alloc.a3);
}

double half_log2_1p(double snr) { return 0.5 * std::log2(1.0 + snr); }

SnrPair relay_snrs(const ChannelRealization& h, const PowerAllocation& alloc, const SnrPoint& snr) {
  const double g = h.beta_sr * snr.rho;
  return {g * alloc.a1 / (g * alloc.a2 + 1.0), g * alloc.a2};
}

SnrPair dest_snrs(const ChannelRealization& h, const PowerAllocation& alloc, const SnrPoint& snr) {
  const double s = varsigma(alloc);
  const double num = h.beta_sd * h.beta_rd * s * s * snr.rho;
  const double den1 = alloc.a4 * h.beta_rd + alloc.a2 * h.beta_sd;
  const double den2 = alloc.a3 * h.beta_rd + alloc.a1 * h.beta_sd;
  if (den1 == 0.0 || den2 == 0.0) return {0.0, 0.0};
  return {num / den1, num / den2};
}

RatePair instantaneous_rates(const ChannelRealization& h, const PowerAllocation& alloc,
                             const SnrPoint& snr) {
  const auto relay = relay_snrs(h, alloc, snr);
  const auto dest = dest_snrs(h, alloc, snr);
  RatePair r;
  r.c_x1 = half_log2_1p(std::min(dest.x1, relay.x1));
  r.c_x2 = half_log2_1p(std::min(dest.x2, relay.x2));
  r.c_sum = r.c_x1 + r.c_x2;
  return r;
}

RatePair baseline_crs_noma_rates(const ChannelRealization& h, double a1, const SnrPoint& snr) {
  const double a2 = 1.0 - a1;
  const double g_sd = h.beta_sd * snr.rho;
  const double g_sr = h.beta_sr * snr.rho;
  const double direct = a1 * g_sd / (a2 * g_sd + 1.0);
  const double relay = a1 * g_sr / (a2 * g_sr + 1.0);
  RatePair r;
  r.c_x1 = half_log2_1p(std::min(direct, relay));
  r.c_x2 = half_log2_1p(std::min(a2 * g_sr, h.beta_rd * snr.rho));
  r.c_sum = r.c_x1 + r.c_x2;
  return r;
}

}  // namespace noma
