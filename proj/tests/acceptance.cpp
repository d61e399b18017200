// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "noma/analysis.hpp"
#include "noma/experiment.hpp"
#include "noma/monte_carlo.hpp"
#include "noma/power_allocation.hpp"
#include "noma/special_functions.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace noma;

namespace {

const ChannelVariances kSetup1{1.0, 10.0, 2.0};
const ChannelVariances kSetup2{1.0, 2.0, 10.0};
const PowerAllocation kFixed = PowerAllocation::make(0.95, 0.05);

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::vector<SnrPoint> grid_0_50() {
  std::vector<SnrPoint> g;
  for (int db = 0; db <= 50; db += 5) g.push_back(SnrPoint::from_db(db));
  return g;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome cdf_validation() {
  const auto t0 = std::chrono::steady_clock::now();
  MonteCarloConfig cfg;
  cfg.n_realizations = 100000;
  cfg.variances = kSetup1;
  cfg.alloc = kFixed;
  const auto snr = SnrPoint::from_db(20);
  const auto F = empirical_cdf_y(cfg, snr);
  const AnalysisParams p{kFixed, kSetup1, snr};
  const double ks = F.ks_distance([&](double y) { return 1.0 - ccdf_y(y, p); });
  return {ks <= 0.01, fmt("KS = %.5f", ks) + fmt(" (limit 0.01, %.2f s)", seconds_since(t0))};
}

Outcome closed_vs_simulation(const Ensemble& e) {
  double worst = 0.0;
  for (const auto& snr : grid_0_50()) {
    if (snr.rho_db < 30) continue;
    const double mc = compare_schemes(e, kFixed, snr).proposed.mean;
    const double cf = ergodic_sr_closed({kFixed, kSetup1, snr});
    worst = std::max(worst, std::abs(mc - cf));
  }
  return {worst <= 0.1, fmt("max |MC - closed| over 30..50 dB = %.4f (limit 0.1)", worst)};
}

Outcome superiority(const Ensemble& e1, const Ensemble& e2) {
  bool ok = true;
  std::string failures;
  for (int s = 0; s < 2; ++s) {
    const auto& e = s == 0 ? e1 : e2;
    for (const auto& snr : grid_0_50()) {
      const auto cmp = compare_schemes(e, kFixed, snr);
      const double diff = cmp.proposed.mean - cmp.baseline.mean;
      if (diff < 0.0) {
        ok = false;
        failures += " setup" + std::to_string(s + 1) + "@" + fmt("%.0f dB", snr.rho_db) + fmt(" (%+.4f)", diff);
      }
    }
  }
  return {ok, ok ? "proposed >= baseline at every point" : "proposed < baseline at" + failures};
}

Outcome slope() {
  const double s = ergodic_sr_closed({kFixed, kSetup1, SnrPoint::from_db(60)}) -
                   ergodic_sr_closed({kFixed, kSetup1, SnrPoint::from_db(50)});
  return {std::abs(s - 1.661) <= 0.02, fmt("SR(60 dB) - SR(50 dB) = %.4f (target 1.661 +/- 0.02)", s)};
}

Outcome optimal_vs_suboptimal() {
  const auto snr = SnrPoint::from_db(40);
  bool ok = true;
  std::string detail;
  for (int s = 0; s < 2; ++s) {
    const auto& v = s == 0 ? kSetup1 : kSetup2;
    const auto grid = grid_search(v, snr, Objective::closed_form);
    const auto sub = suboptimal_solve(v);
    const double sub_sr = evaluate_objective(Objective::closed_form, sub.a1, sub.a3, v, snr);
    const double gap = grid.objective - sub_sr;
    ok = ok && gap <= 0.1;
    detail += (s ? "; " : "") + std::string("setup") + std::to_string(s + 1) + fmt(": gap %.4f", gap) +
              " (" + to_string(sub.status) + ")";
  }
  return {ok, detail + " (limit 0.1)"};
}

Outcome setup_asymmetry() {
  double adv[2];
  for (int s = 0; s < 2; ++s) {
    auto cfg = default_config();
    cfg.setup = s + 1;
    cfg.variances = s == 0 ? kSetup1 : kSetup2;
    cfg.objective = Objective::monte_carlo;
    cfg.snr_start = cfg.snr_stop = 10;
    cfg.n = 50000;
    const auto row = optimize_rows(cfg).front();
    adv[s] = row.optimal.objective - row.baseline_opt_sr;
  }
  return {adv[0] >= adv[1], fmt("advantage setup1 = %.4f", adv[0]) + fmt(", setup2 = %.4f", adv[1])};
}

Outcome special_functions() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto xs = oracle::log_space(1e-6, 50.0, 10000);
  double worst_k = 0.0, worst_e = 0.0;
  for (double x : xs) {
    const double k = oracle::bessel_k1(x);
    worst_k = std::max(worst_k, std::abs(bessel_k1(x) - k) / k);
    const double e = oracle::expint_ei(-x);
    worst_e = std::max(worst_e, std::abs(expint_ei(-x) - e) / std::abs(e));
  }
  const double t = seconds_since(t0);
  return {worst_k <= 1e-10 && worst_e <= 1e-10 && t < 10.0,
          fmt("max rel err K1 = %.2e", worst_k) + fmt(", Ei = %.2e", worst_e) + fmt(" (%.2f s)", t)};
}

Outcome limits() {
  const double r = rate_x1_semianalytic({kFixed, kSetup1, SnrPoint::from_linear(1e6)});
  const AnalysisParams p{kFixed, kSetup1, SnrPoint::from_db(20)};
  const double cx = ccdf_x_highsnr(1e-9, p), cy = ccdf_y(1e-9, p);
  const bool ok = std::abs(r - 2.1610) <= 1e-3 && cx >= 0.999 && cy >= 0.999;
  return {ok, fmt("rate_x1 = %.5f", r) + fmt(", ccdf_x(1e-9) = %.6f", cx) + fmt(", ccdf_y(1e-9) = %.6f", cy)};
}

Outcome gradient_consistency() {
  std::mt19937_64 rng(20240101);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  const double h = 1e-6;
  int worst = 100;
  std::string detail;
  for (int s = 0; s < 2; ++s) {
    const auto& v = s == 0 ? kSetup1 : kSetup2;
    auto f = [&](double a1, double a3) { return highsnr_allocation_term(a1, a3, v); };
    int m1 = 0, m2 = 0;
    for (int i = 0; i < 100; ++i) {
      const double a1 = u(rng), a3 = u(rng);
      const auto r = residuals(a1, a3, v);
      const double g1 = (f(a1 + h, a3) - f(a1 - h, a3)) / (2 * h);
      const double g3 = (f(a1, a3 + h) - f(a1, a3 - h)) / (2 * h);
      m1 += (r.r1 > 0) == (g1 > 0);
      m2 += (r.r2 > 0) == (g3 > 0);
    }
    worst = std::min({worst, m1, m2});
    detail += (s ? "; " : "") + std::string("setup") + std::to_string(s + 1) + ": " + std::to_string(m1) + "/100, " +
              std::to_string(m2) + "/100";
  }
  return {worst >= 95, detail + " (need 95)"};
}

Outcome determinism() {
  auto cfg = default_config();
  std::ostringstream a, b;
  cfg.threads = 1;
  run_sweep(cfg, a);
  cfg.threads = 4;
  run_sweep(cfg, b);
  const bool same = a.str() == b.str() && !a.str().empty();
  return {same, same ? "sweep CSV identical for 1 and 4 workers" : "sweep CSV differs between 1 and 4 workers"};
}

}  // namespace

int main() {
  const auto e1 = draw_ensemble(kSetup1, 200000, 20240101);
  const auto e2 = draw_ensemble(kSetup2, 200000, 20240101);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"CDF of Y matches simulation", cdf_validation},
      {"closed form matches simulation at high SNR", [&] { return closed_vs_simulation(e1); }},
      {"proposed scheme beats the baseline", [&] { return superiority(e1, e2); }},
      {"high-SNR slope", slope},
      {"grid optimum vs suboptimal allocation", optimal_vs_suboptimal},
      {"setup asymmetry of the optimized advantage", setup_asymmetry},
      {"special functions match quadrature", special_functions},
      {"limit checks", limits},
      {"residual signs match the gradient", gradient_consistency},
      {"sweep determinism across worker counts", determinism},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    failed += !o.pass;
    std::printf("[%s] criterion %zu: %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
