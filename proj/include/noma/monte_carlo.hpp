#pragma once

#include "noma/channel.hpp"
#include "noma/link.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace noma {

/// Realizations per independently seeded stream. Fixes the stream layout so
/// results do not depend on the number of workers.
inline constexpr std::size_t kChunkSize = 4096;

struct MonteCarloConfig {
  std::size_t n_realizations = 20000;
  std::uint64_t seed = 20240101;
  ChannelVariances variances;
  PowerAllocation alloc;
  std::vector<SnrPoint> snr_grid;
  /// 0 selects std::thread::hardware_concurrency().
  unsigned threads = 0;

  /// Throws std::invalid_argument on n = 0, invalid components or a grid that
  /// is not strictly increasing.
  void validate() const;
};

/// A fixed set of channel draws. Chunk k holds realizations
/// [k * kChunkSize, (k + 1) * kChunkSize) drawn from stream k of the seed.
struct Ensemble {
  std::vector<ChannelRealization> draws;

  std::size_t size() const { return draws.size(); }
  std::span<const ChannelRealization> chunk(std::size_t k) const;
  std::size_t chunk_count() const { return (draws.size() + kChunkSize - 1) / kChunkSize; }
};

Ensemble draw_ensemble(const ChannelVariances& v, std::size_t n, std::uint64_t seed,
                       unsigned threads = 0);

struct RateStats {
  double mean = 0.0;
  /// Sample standard deviation (n - 1 divisor) over sqrt(n); 0 when n = 1.
  double std_error = 0.0;
};

/// Runs body(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

/// Mean and standard error of per-realization values, reduced chunk by chunk
/// in index order.
RateStats reduce_over(const Ensemble& ensemble, unsigned threads,
                      const std::function<double(const ChannelRealization&)>& value);

struct SchemeComparison {
  RateStats proposed;
  RateStats baseline;
};

/// Both schemes on the same draws (common random numbers).
SchemeComparison compare_schemes(const Ensemble& ensemble, const PowerAllocation& alloc,
                                 const SnrPoint& snr, unsigned threads = 0);

/// Serial mean of the proposed-scheme sum rate; used as a Monte Carlo
/// objective by the optimizers, which parallelize over candidates instead.
double mean_sum_rate(const Ensemble& ensemble, const PowerAllocation& alloc, const SnrPoint& snr);
double mean_baseline_sum_rate(const Ensemble& ensemble, double a1, const SnrPoint& snr);

RateStats estimate_sum_rate(const MonteCarloConfig& cfg, const SnrPoint& at);

/// Right-continuous step CDF over a sorted sample.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> samples);

  double operator()(double y) const;
  std::span<const double> samples() const { return sorted_; }
  std::size_t size() const { return sorted_.size(); }
  double quantile(double q) const;

  /// Kolmogorov-Smirnov distance sup |F_n - F| against a continuous CDF,
  /// evaluated on both sides of every jump.
  double ks_distance(const std::function<double(double)>& cdf) const;

 private:
  std::vector<double> sorted_;
};

/// Empirical CDF of Y = min(gamma_D^(x2), gamma_R^(x2)) over cfg.n_realizations draws.
EmpiricalCdf empirical_cdf_y(const MonteCarloConfig& cfg, const SnrPoint& at);

struct SweepRow {
  double rho_db = 0.0;
  double mc_mean_sum_rate = 0.0;
  double mc_std_error = 0.0;
  double closed_form = 0.0;
  double highsnr_approx = 0.0;
  double baseline_mc_mean = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

/// One row per grid point; every point reuses the same ensemble.
SweepResult sweep(const MonteCarloConfig& cfg);

}  // namespace noma
