#pragma once

#include "noma/channel.hpp"

namespace noma {

/// Source split (a1, a2) and relay split (a3, a4) of the total transmit power.
struct PowerAllocation {
  double a1 = 0.95;
  double a2 = 0.05;
  double a3 = 0.05;
  double a4 = 0.95;

  /// Full validation: a1, a3 in (0, 1) and a1 > a2 so the strong-power
  /// symbol x1 is decoded first. Throws std::invalid_argument.
  static PowerAllocation make(double a1, double a3);

  /// Only requires a1, a3 in (0, 1). For optimizers that search the whole
  /// unit square.
  static PowerAllocation relaxed(double a1, double a3);

  bool sic_ordered() const noexcept { return a1 > a2; }

  friend bool operator==(const PowerAllocation&, const PowerAllocation&) = default;
};

/// Linear transmit SNR rho = P_t / sigma^2 with its dB form.
struct SnrPoint {
  double rho = 1.0;
  double rho_db = 0.0;

  static SnrPoint from_db(double db);
  static SnrPoint from_linear(double rho);
};

/// Per-symbol achievable rates in bits/s/Hz.
struct RatePair {
  double c_x1 = 0.0;
  double c_x2 = 0.0;
  double c_sum = 0.0;
};

struct SnrPair {
  double x1 = 0.0;
  double x2 = 0.0;
};

/// sqrt(a1 a4) + sqrt(a2 a3), the amplitude gain of the destination combiner.
double varsigma(const PowerAllocation& alloc);

/// SIC at the relay: x1 with x2 as interference, then x2 interference-free.
SnrPair relay_snrs(const ChannelRealization& h, const PowerAllocation& alloc, const SnrPoint& snr);

/// Post-combining destination SNRs. Returns (0, 0) when beta_sd = beta_rd = 0.
SnrPair dest_snrs(const ChannelRealization& h, const PowerAllocation& alloc, const SnrPoint& snr);

/// 1/2 log2(1 + min(destination, relay)) for each symbol. The 1/2 accounts for
/// the two slots of the half-duplex relay.
RatePair instantaneous_rates(const ChannelRealization& h, const PowerAllocation& alloc,
                             const SnrPoint& snr);

/// CRS-NOMA reference scheme. Slot 1: the destination decodes x1 from the
/// direct link with x2 as noise while the relay runs SIC on x1, x2. Slot 2: the
/// relay forwards x2 at full power.
RatePair baseline_crs_noma_rates(const ChannelRealization& h, double a1, const SnrPoint& snr);

double half_log2_1p(double snr);

}  // namespace noma
