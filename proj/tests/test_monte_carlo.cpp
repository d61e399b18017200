#include "noma/monte_carlo.hpp"

#include "noma/analysis.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace noma;

namespace {

MonteCarloConfig setup1(std::size_t n) {
  MonteCarloConfig cfg;
  cfg.n_realizations = n;
  cfg.variances = {1.0, 10.0, 2.0};
  cfg.alloc = PowerAllocation::make(0.95, 0.05);
  for (double db = 0; db <= 50; db += 10) cfg.snr_grid.push_back(SnrPoint::from_db(db));
  return cfg;
}

}  // namespace

TEST_CASE("ensemble equals a straight stream replay") {
  const ChannelVariances v{1.0, 10.0, 2.0};
  const std::size_t n = 3 * kChunkSize + 123;
  const auto e = draw_ensemble(v, n, 77, 3);
  const auto ref = oracle::replay(v, n, 77, kChunkSize);
  REQUIRE(e.size() == n);
  CHECK(e.chunk_count() == 4);
  CHECK(e.chunk(3).size() == 123);
  CHECK(e.draws == ref);
}

TEST_CASE("ensemble does not depend on the worker count") {
  const ChannelVariances v{1.0, 2.0, 10.0};
  const auto a = draw_ensemble(v, 20000, 9, 1);
  const auto b = draw_ensemble(v, 20000, 9, 4);
  CHECK(a.draws == b.draws);
}

TEST_CASE("single realization") {
  auto cfg = setup1(1);
  const auto at = SnrPoint::from_db(20);
  const auto stats = estimate_sum_rate(cfg, at);
  const auto h = oracle::replay(cfg.variances, 1, cfg.seed, kChunkSize).front();
  CHECK(stats.std_error == 0.0);
  CHECK(stats.mean == doctest::Approx(instantaneous_rates(h, cfg.alloc, at).c_sum).epsilon(1e-15));
}

TEST_CASE("reduction matches a serial two-pass computation") {
  const ChannelVariances v{1.0, 10.0, 2.0};
  const auto e = draw_ensemble(v, 10000, 4);
  const auto alloc = PowerAllocation::make(0.9, 0.1);
  const auto snr = SnrPoint::from_db(30);
  double sum = 0.0;
  for (const auto& h : e.draws) sum += instantaneous_rates(h, alloc, snr).c_sum;
  const double mean = sum / e.size();
  double ss = 0.0;
  for (const auto& h : e.draws) ss += std::pow(instantaneous_rates(h, alloc, snr).c_sum - mean, 2);
  const double se = std::sqrt(ss / (e.size() - 1) / e.size());

  const auto cmp = compare_schemes(e, alloc, snr, 2);
  CHECK(cmp.proposed.mean == doctest::Approx(mean).epsilon(1e-12));
  CHECK(cmp.proposed.std_error == doctest::Approx(se).epsilon(1e-9));
  CHECK(mean_sum_rate(e, alloc, snr) == doctest::Approx(mean).epsilon(1e-12));
  CHECK(cmp.baseline.mean == doctest::Approx(mean_baseline_sum_rate(e, 0.9, snr)).epsilon(1e-12));
}

TEST_CASE("standard error shrinks as 1/sqrt(n)") {
  auto small = setup1(10000);
  auto large = setup1(40000);
  const auto at = SnrPoint::from_db(20);
  const double ratio = estimate_sum_rate(small, at).std_error / estimate_sum_rate(large, at).std_error;
  CHECK(ratio == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("empirical CDF") {
  EmpiricalCdf F({3.0, 1.0, 2.0, 2.0});
  CHECK(F(0.5) == 0.0);
  CHECK(F(1.0) == 0.25);
  CHECK(F(2.0) == 0.75);
  CHECK(F(3.0) == 1.0);
  CHECK(F(1e9) == 1.0);
  CHECK(F.quantile(0.0) == 1.0);
  CHECK(F.quantile(1.0) == 3.0);
  // uniform F(y) = y / 4 on [0, 4]: largest gap just before/after 2
  const double d = F.ks_distance([](double y) { return std::clamp(y / 4.0, 0.0, 1.0); });
  CHECK(d == doctest::Approx(0.25));
  CHECK_THROWS_AS(EmpiricalCdf(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("empirical CDF of Y agrees with the analytic CCDF") {
  auto cfg = setup1(50000);
  const auto at = SnrPoint::from_db(20);
  const auto F = empirical_cdf_y(cfg, at);
  CHECK(F.size() == 50000);
  const AnalysisParams p{cfg.alloc, cfg.variances, at};
  CHECK(F.ks_distance([&](double y) { return 1.0 - ccdf_y(y, p); }) <= 0.01);
}

TEST_CASE("sweep rows") {
  auto cfg = setup1(20000);
  cfg.threads = 2;
  const auto res = sweep(cfg);
  REQUIRE(res.rows.size() == cfg.snr_grid.size());
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    const auto& r = res.rows[i];
    CHECK(r.rho_db == doctest::Approx(cfg.snr_grid[i].rho_db));
    CHECK(r.mc_std_error > 0.0);
    CHECK(r.closed_form == doctest::Approx(
                               ergodic_sr_closed({cfg.alloc, cfg.variances, cfg.snr_grid[i]})));
    if (i > 0) CHECK(r.mc_mean_sum_rate >= res.rows[i - 1].mc_mean_sum_rate - 2 * r.mc_std_error);
  }
  // the proposed-vs-baseline gap closes at high SNR
  const auto& lo = res.rows[2];  // 20 dB
  const auto& hi = res.rows[5];  // 50 dB
  CHECK(std::abs(hi.mc_mean_sum_rate - hi.baseline_mc_mean) <= std::abs(lo.mc_mean_sum_rate - lo.baseline_mc_mean));
  CHECK(std::abs(hi.mc_mean_sum_rate - hi.closed_form) <= 0.1);

  cfg.threads = 1;
  const auto serial = sweep(cfg);
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    CHECK(serial.rows[i].mc_mean_sum_rate == res.rows[i].mc_mean_sum_rate);
    CHECK(serial.rows[i].mc_std_error == res.rows[i].mc_std_error);
    CHECK(serial.rows[i].baseline_mc_mean == res.rows[i].baseline_mc_mean);
  }
}

TEST_CASE("configuration validation") {
  auto cfg = setup1(0);
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = setup1(10);
  cfg.snr_grid = {SnrPoint::from_db(10), SnrPoint::from_db(10)};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = setup1(10);
  cfg.variances.alpha_sd = 20.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  CHECK_NOTHROW(setup1(10).validate());
}
