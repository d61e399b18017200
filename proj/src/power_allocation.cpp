#include "noma/power_allocation.hpp"

#include "noma/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace noma {

namespace {

struct Auxiliaries {
  double phi1;
  double phi2;
  double psi;
  double denominator;
};

Auxiliaries auxiliaries(double a1, double a3, const ChannelVariances& v) {
  if (!(a1 > 0.0 && a1 < 1.0 && a3 > 0.0 && a3 < 1.0)) {
    std::ostringstream msg;
    msg << "stationarity residuals need a1, a3 in (0, 1): a1=" << a1 << ", a3=" << a3;
    throw std::domain_error(msg.str());
  }
  Auxiliaries x;
  x.phi1 = std::sqrt((1.0 - a3) / a1) - std::sqrt(a3 / (1.0 - a1));
  x.phi2 = std::sqrt(a1 / (1.0 - a3)) - std::sqrt((1.0 - a1) / a3);
  x.psi = std::sqrt(a1 * (1.0 - a3)) + std::sqrt((1.0 - a1) * a3);
  x.denominator = x.psi * x.psi * v.alpha_rd * v.alpha_sd +
                  (1.0 - a1) * (a3 * v.alpha_rd + a1 * v.alpha_sd) * v.alpha_sr;
  return x;
}

double norm(const ResidualPair& r) { return std::hypot(r.r1, r.r2); }

bool inside(double a1, double a3, double margin) {
  return a1 > margin && a1 < 1.0 - margin && a3 > margin && a3 < 1.0 - margin;
}

}  // namespace

ResidualPair published_residuals(double a1, double a3, const ChannelVariances& v) {
  const auto x = auxiliaries(a1, a3, v);
  const double sd = v.alpha_sd, sr = v.alpha_sr, rd = v.alpha_rd;
  ResidualPair r;
  r.r1 = a1 * x.psi *
             (x.phi1 * x.psi * rd * sd + sr * sd - a3 * sr * rd - 2.0 * a1 * sd * sr) /
             x.denominator -
         a1 * x.phi1 - x.psi;
  r.r2 = a1 * x.psi * (x.phi2 * x.psi * rd * sd + (1.0 - a1) * rd * sr) / x.denominator -
         a1 * x.phi2;
  return r;
}

ResidualPair residuals(double a1, double a3, const ChannelVariances& v) {
  const auto x = auxiliaries(a1, a3, v);
  const double sd = v.alpha_sd, sr = v.alpha_sr, rd = v.alpha_rd;
  ResidualPair r;
  r.r1 = a1 * x.phi1 + x.psi -
         a1 * x.psi *
             (x.phi1 * x.psi * rd * sd + sr * sd - a3 * sr * rd - 2.0 * a1 * sd * sr) /
             x.denominator;
  r.r2 = a1 * x.psi * (x.phi2 * x.psi * rd * sd - (1.0 - a1) * rd * sr) / x.denominator -
         a1 * x.phi2;
  return r;
}

NewtonResult newton_2d(const ResidualFn& f, double a1, double a3, const NewtonOptions& opts) {
  NewtonResult out{a1, a3, std::numeric_limits<double>::infinity(), 0, false};
  if (!inside(a1, a3, opts.boundary_margin)) return out;
  ResidualPair r = f(a1, a3);
  double rn = norm(r);
  for (int it = 0; it < opts.max_iterations; ++it) {
    out = {a1, a3, rn, it, rn <= opts.tolerance};
    if (out.converged || !std::isfinite(rn)) return out;

    // Central differences, shrunk near the boundary.
    const double h1 = std::min({opts.fd_step, 0.5 * (a1 - opts.boundary_margin),
                                0.5 * (1.0 - opts.boundary_margin - a1)});
    const double h3 = std::min({opts.fd_step, 0.5 * (a3 - opts.boundary_margin),
                                0.5 * (1.0 - opts.boundary_margin - a3)});
    const auto fp1 = f(a1 + h1, a3), fm1 = f(a1 - h1, a3);
    const auto fp3 = f(a1, a3 + h3), fm3 = f(a1, a3 - h3);
    const double j11 = (fp1.r1 - fm1.r1) / (2 * h1), j12 = (fp3.r1 - fm3.r1) / (2 * h3);
    const double j21 = (fp1.r2 - fm1.r2) / (2 * h1), j22 = (fp3.r2 - fm3.r2) / (2 * h3);
    const double det = j11 * j22 - j12 * j21;
    if (!std::isfinite(det) || det == 0.0) return out;
    const double d1 = -(j22 * r.r1 - j12 * r.r2) / det;
    const double d3 = -(-j21 * r.r1 + j11 * r.r2) / det;

    double lambda = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 40; ++halving, lambda *= 0.5) {
      const double n1 = a1 + lambda * d1, n3 = a3 + lambda * d3;
      if (!inside(n1, n3, opts.boundary_margin)) continue;
      const auto rn_new = f(n1, n3);
      const double nn = norm(rn_new);
      if (std::isfinite(nn) && nn < rn) {
        a1 = n1;
        a3 = n3;
        r = rn_new;
        rn = nn;
        accepted = true;
        break;
      }
    }
    if (!accepted) return out;
  }
  out = {a1, a3, rn, opts.max_iterations, rn <= opts.tolerance};
  return out;
}

std::vector<double> allocation_lattice(double step, double lo) {
  if (!(step > 0.0 && step <= 0.5)) throw std::invalid_argument("lattice step must lie in (0, 0.5]");
  std::vector<double> out;
  for (int k = 1;; ++k) {
    const double a = k * step;
    if (a >= 1.0 - 1e-12) break;
    if (a > lo + 1e-12) out.push_back(a);
  }
  return out;
}

namespace {

// Best point on a lattice; ties keep the earliest (a1, then a3) candidate.
struct LatticeBest {
  double a1 = 0.0;
  double a3 = 0.0;
  double value = -std::numeric_limits<double>::infinity();
};

LatticeBest lattice_argmax(const std::vector<double>& a1s, const std::vector<double>& a3s,
                           const AllocationObjective& objective, unsigned threads) {
  std::vector<double> values(a1s.size() * a3s.size());
  parallel_for(a1s.size(), threads, [&](std::size_t i) {
    for (std::size_t j = 0; j < a3s.size(); ++j) values[i * a3s.size() + j] = objective(a1s[i], a3s[j]);
  });
  LatticeBest best;
  for (std::size_t i = 0; i < a1s.size(); ++i) {
    for (std::size_t j = 0; j < a3s.size(); ++j) {
      const double v = values[i * a3s.size() + j];
      if (v > best.value) best = {a1s[i], a3s[j], v};
    }
  }
  return best;
}

std::vector<double> local_lattice(double centre, double half_width, double step, double lo, double hi) {
  std::vector<double> out;
  const int k = static_cast<int>(std::lround(half_width / step));
  for (int i = -k; i <= k; ++i) {
    const double a = centre + i * step;
    if (a >= lo - 1e-12 && a <= hi + 1e-12) out.push_back(std::clamp(a, lo, hi));
  }
  return out;
}

}  // namespace

AllocationSolution suboptimal_solve(const ChannelVariances& v,
                                    std::optional<std::pair<double, double>> start,
                                    const SuboptimalOptions& opts) {
  v.validate();
  auto f = [&](double a1, double a3) { return residuals(a1, a3, v); };
  std::vector<std::pair<double, double>> starts;
  if (start) {
    starts.push_back(*start);
  } else {
    for (int i = 1; i <= 9; ++i)
      for (int j = 1; j <= 9; ++j) starts.emplace_back(0.1 * i, 0.1 * j);
  }

  struct Root {
    double a1, a3, residual, objective;
  };
  std::vector<Root> roots;
  double best_residual = std::numeric_limits<double>::infinity();
  for (const auto& [s1, s3] : starts) {
    const auto nr = newton_2d(f, s1, s3, opts.newton);
    best_residual = std::min(best_residual, nr.residual_norm);
    if (!nr.converged) continue;
    const bool seen = std::any_of(roots.begin(), roots.end(), [&](const Root& r) {
      return std::abs(r.a1 - nr.a1) < 1e-6 && std::abs(r.a3 - nr.a3) < 1e-6;
    });
    if (!seen) roots.push_back({nr.a1, nr.a3, nr.residual_norm, highsnr_allocation_term(nr.a1, nr.a3, v)});
  }

  AllocationSolution sol;
  sol.method = AllocationMethod::root_suboptimal;
  if (!roots.empty()) {
    const auto best = std::max_element(roots.begin(), roots.end(), [](const Root& x, const Root& y) {
      return x.objective < y.objective;
    });
    sol.a1 = best->a1;
    sol.a3 = best->a3;
    sol.objective = best->objective;
    sol.residual_norm = best->residual;
    sol.status = roots.size() == 1 ? RootStatus::converged : RootStatus::multiple_roots;
  } else {
    const double step = opts.grid_step;
    auto objective = [&](double a1, double a3) { return highsnr_allocation_term(a1, a3, v); };
    const auto lattice = allocation_lattice(step);
    auto best = lattice_argmax(lattice, lattice, objective, 1);
    const double lo = step, hi = 1.0 - step;
    double h = step;
    for (int round = 0; round < opts.refine_rounds; ++round) {
      const double fine = h / 10.0;
      const auto a1s = local_lattice(best.a1, h, fine, lo, hi);
      const auto a3s = local_lattice(best.a3, h, fine, lo, hi);
      const auto candidate = lattice_argmax(a1s, a3s, objective, 1);
      if (candidate.value > best.value) best = candidate;
      h = fine;
    }
    if (!std::isfinite(best.value)) {
      throw SolverError("suboptimal_solve: no root and no finite objective on the fallback lattice",
                        best_residual);
    }
    sol.a1 = best.a1;
    sol.a3 = best.a3;
    sol.objective = best.value;
    sol.residual_norm = norm(residuals(best.a1, best.a3, v));
    sol.status = RootStatus::no_interior_root;
  }
  sol.violates_sic_order = !(sol.a1 > 0.5);
  return sol;
}

AllocationSolution grid_search(const AllocationObjective& objective, double step, unsigned threads) {
  if (!(step > 0.0 && step <= 0.1)) throw std::invalid_argument("grid step must lie in (0, 0.1]");
  const auto a1s = allocation_lattice(step, 0.5);
  const auto a3s = allocation_lattice(step);
  const auto best = lattice_argmax(a1s, a3s, objective, threads);
  AllocationSolution sol;
  sol.a1 = best.a1;
  sol.a3 = best.a3;
  sol.objective = best.value;
  sol.method = AllocationMethod::grid_exhaustive;
  return sol;
}

double evaluate_objective(Objective objective, double a1, double a3, const ChannelVariances& v,
                          const SnrPoint& snr, const Ensemble* ensemble) {
  const auto alloc = PowerAllocation::relaxed(a1, a3);
  switch (objective) {
    case Objective::closed_form:
      return ergodic_sr_closed({alloc, v, snr});
    case Objective::high_snr:
      return ergodic_sr_highsnr({alloc, v, snr});
    case Objective::monte_carlo:
      if (ensemble == nullptr) throw std::invalid_argument("Monte Carlo objective needs an ensemble");
      return mean_sum_rate(*ensemble, alloc, snr);
  }
  throw std::invalid_argument("unknown objective");
}

AllocationSolution grid_search(const Ensemble& ensemble, const ChannelVariances& v,
                               const SnrPoint& snr, double step, unsigned threads) {
  return grid_search(
      [&](double a1, double a3) {
        return evaluate_objective(Objective::monte_carlo, a1, a3, v, snr, &ensemble);
      },
      step, threads);
}

AllocationSolution grid_search(const ChannelVariances& v, const SnrPoint& snr, Objective objective,
                               const GridOptions& opts) {
  v.validate();
  if (objective == Objective::monte_carlo) {
    const auto ensemble = draw_ensemble(v, opts.n_realizations, opts.seed, opts.threads);
    return grid_search(ensemble, v, snr, opts.step, opts.threads);
  }
  return grid_search(
      [&](double a1, double a3) { return evaluate_objective(objective, a1, a3, v, snr); }, opts.step,
      opts.threads);
}

const char* to_string(RootStatus status) {
  switch (status) {
    case RootStatus::not_applicable: return "grid";
    case RootStatus::converged: return "root";
    case RootStatus::multiple_roots: return "multiple_roots";
    case RootStatus::no_interior_root: return "no_interior_root";
  }
  return "unknown";
}

}  // namespace noma
