#include "noma/monte_carlo.hpp"

#include "noma/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace noma {

namespace {

unsigned resolve_threads(unsigned threads, std::size_t work) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(work, 1)));
}

// Welford accumulator; merge() is Chan's pairwise update.
struct Moments {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    count += 1.0;
    const double d = x - mean;
    mean += d / count;
    m2 += d * (x - mean);
  }

  void merge(const Moments& o) {
    if (o.count == 0.0) return;
    if (count == 0.0) {
      *this = o;
      return;
    }
    const double total = count + o.count;
    const double d = o.mean - mean;
    mean += d * o.count / total;
    m2 += o.m2 + d * d * count * o.count / total;
    count = total;
  }

  RateStats stats() const {
    RateStats s;
    s.mean = mean;
    s.std_error = count > 1.0 ? std::sqrt(m2 / (count - 1.0) / count) : 0.0;
    return s;
  }
};

}  // namespace

void MonteCarloConfig::validate() const {
  if (n_realizations == 0) throw std::invalid_argument("n_realizations must be at least 1");
  variances.validate();
  (void)PowerAllocation::make(alloc.a1, alloc.a3);
  for (std::size_t i = 1; i < snr_grid.size(); ++i) {
    if (!(snr_grid[i].rho_db > snr_grid[i - 1].rho_db)) {
      throw std::invalid_argument("SNR grid must be strictly increasing");
    }
  }
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  const unsigned workers = resolve_threads(threads, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
}

std::span<const ChannelRealization> Ensemble::chunk(std::size_t k) const {
  const std::size_t begin = k * kChunkSize;
  const std::size_t end = std::min(draws.size(), begin + kChunkSize);
  return std::span<const ChannelRealization>(draws).subspan(begin, end - begin);
}

Ensemble draw_ensemble(const ChannelVariances& v, std::size_t n, std::uint64_t seed, unsigned threads) {
  Ensemble e;
  e.draws.resize(n);
  const std::size_t chunks = e.chunk_count();
  parallel_for(chunks, threads, [&](std::size_t k) {
    auto gen = SeededGenerator::for_stream(seed, k);
    const std::size_t end = std::min(n, (k + 1) * kChunkSize);
    for (std::size_t i = k * kChunkSize; i < end; ++i) e.draws[i] = sample(v, gen);
  });
  return e;
}

RateStats reduce_over(const Ensemble& ensemble, unsigned threads,
                      const std::function<double(const ChannelRealization&)>& value) {
  std::vector<Moments> partial(ensemble.chunk_count());
  parallel_for(partial.size(), threads, [&](std::size_t k) {
    Moments m;
    for (const auto& h : ensemble.chunk(k)) m.add(value(h));
    partial[k] = m;
  });
  Moments total;
  for (const auto& m : partial) total.merge(m);
  return total.stats();
}

SchemeComparison compare_schemes(const Ensemble& ensemble, const PowerAllocation& alloc,
                                 const SnrPoint& snr, unsigned threads) {
  std::vector<Moments> proposed(ensemble.chunk_count());
  std::vector<Moments> baseline(ensemble.chunk_count());
  parallel_for(proposed.size(), threads, [&](std::size_t k) {
    Moments p;
    Moments b;
    for (const auto& h : ensemble.chunk(k)) {
      p.add(instantaneous_rates(h, alloc, snr).c_sum);
      b.add(baseline_crs_noma_rates(h, alloc.a1, snr).c_sum);
    }
    proposed[k] = p;
    baseline[k] = b;
  });
  Moments p;
  Moments b;
  for (std::size_t k = 0; k < proposed.size(); ++k) {
    p.merge(proposed[k]);
    b.merge(baseline[k]);
  }
  return {p.stats(), b.stats()};
}

double mean_sum_rate(const Ensemble& ensemble, const PowerAllocation& alloc, const SnrPoint& snr) {
  Moments m;
  for (const auto& h : ensemble.draws) m.add(instantaneous_rates(h, alloc, snr).c_sum);
  return m.mean;
}

double mean_baseline_sum_rate(const Ensemble& ensemble, double a1, const SnrPoint& snr) {
  Moments m;
  for (const auto& h : ensemble.draws) m.add(baseline_crs_noma_rates(h, a1, snr).c_sum);
  return m.mean;
}

RateStats estimate_sum_rate(const MonteCarloConfig& cfg, const SnrPoint& at) {
  cfg.validate();
  const auto ensemble = draw_ensemble(cfg.variances, cfg.n_realizations, cfg.seed, cfg.threads);
  return reduce_over(ensemble, cfg.threads, [&](const ChannelRealization& h) {
    return instantaneous_rates(h, cfg.alloc, at).c_sum;
  });
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  if (sorted_.empty()) throw std::invalid_argument("empirical CDF needs at least one sample");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double y) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), y);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalCdf::quantile(double q) const {
  q = std::clamp(q, 0.0, 1.0);
  const auto idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted_.size())));
  return sorted_[std::min(sorted_.size(), std::max<std::size_t>(idx, 1)) - 1];
}

double EmpiricalCdf::ks_distance(const std::function<double(double)>& cdf) const {
  const double n = static_cast<double>(sorted_.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < sorted_.size()) {
    std::size_t j = i;
    while (j + 1 < sorted_.size() && sorted_[j + 1] == sorted_[i]) ++j;
    const double f = cdf(sorted_[i]);
    d = std::max({d, std::abs(static_cast<double>(j + 1) / n - f),
                  std::abs(static_cast<double>(i) / n - f)});
    i = j + 1;
  }
  return d;
}

EmpiricalCdf empirical_cdf_y(const MonteCarloConfig& cfg, const SnrPoint& at) {
  cfg.validate();
  const auto ensemble = draw_ensemble(cfg.variances, cfg.n_realizations, cfg.seed, cfg.threads);
  std::vector<double> y(ensemble.size());
  parallel_for(ensemble.chunk_count(), cfg.threads, [&](std::size_t k) {
    const std::size_t begin = k * kChunkSize;
    const auto chunk = ensemble.chunk(k);
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      const auto relay = relay_snrs(chunk[i], cfg.alloc, at);
      const auto dest = dest_snrs(chunk[i], cfg.alloc, at);
      y[begin + i] = std::min(dest.x2, relay.x2);
    }
  });
  return EmpiricalCdf(std::move(y));
}

SweepResult sweep(const MonteCarloConfig& cfg) {
  cfg.validate();
  const auto ensemble = draw_ensemble(cfg.variances, cfg.n_realizations, cfg.seed, cfg.threads);
  SweepResult result;
  result.rows.reserve(cfg.snr_grid.size());
  for (const auto& snr : cfg.snr_grid) {
    const auto cmp = compare_schemes(ensemble, cfg.alloc, snr, cfg.threads);
    const AnalysisParams p{cfg.alloc, cfg.variances, snr};
    SweepRow row;
    row.rho_db = snr.rho_db;
    row.mc_mean_sum_rate = cmp.proposed.mean;
    row.mc_std_error = cmp.proposed.std_error;
    row.closed_form = ergodic_sr_closed(p);
    row.highsnr_approx = ergodic_sr_highsnr(p);
    row.baseline_mc_mean = cmp.baseline.mean;
    result.rows.push_back(row);
  }
  return result;
}

}  // namespace noma
