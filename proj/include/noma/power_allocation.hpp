#pragma once

#include "noma/channel.hpp"
#include "noma/link.hpp"
#include "noma/monte_carlo.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace noma {

enum class AllocationMethod { grid_exhaustive, root_suboptimal };

enum class RootStatus {
  not_applicable,    // grid solutions
  converged,         // single interior root
  multiple_roots,    // several distinct roots; the best objective is returned
  no_interior_root,  // fallback: best grid-refined point of the high-SNR objective
};

struct AllocationSolution {
  double a1 = 0.0;
  double a3 = 0.0;
  /// Predicted ergodic sum rate in bits/s/Hz. For root solutions this is the
  /// rho-independent high-SNR term; add 1/2 log2(rho) for a given SNR.
  double objective = 0.0;
  AllocationMethod method = AllocationMethod::grid_exhaustive;
  RootStatus status = RootStatus::not_applicable;
  /// Residual norm at the returned point (root solutions only).
  double residual_norm = 0.0;
  /// a1 <= 0.5 for an unconstrained root solution.
  bool violates_sic_order = false;
};

struct ResidualPair {
  double r1 = 0.0;
  double r2 = 0.0;
};

/// Stationarity conditions of the high-SNR sum rate, oriented so that
/// r_i = a1 * Psi * d f / d a_i with f the allocation term in nats. Both vanish
/// at an interior stationary point. Throws std::domain_error unless
/// a1, a3 in (0, 1).
ResidualPair residuals(double a1, double a3, const ChannelVariances& v);

/// The two conditions exactly as published: the first is -r1 and the second
/// carries the opposite sign on its (1 - a1) alpha_RD alpha_SR term.
ResidualPair published_residuals(double a1, double a3, const ChannelVariances& v);

struct NewtonOptions {
  double tolerance = 1e-8;
  int max_iterations = 100;
  double fd_step = 1e-7;
  /// Points closer than this to the boundary of (0,1)^2 are rejected.
  double boundary_margin = 1e-9;
};

struct NewtonResult {
  double a1 = 0.0;
  double a3 = 0.0;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

using ResidualFn = std::function<ResidualPair(double, double)>;

/// Damped Newton on a 2-D residual with a central-difference Jacobian. The
/// step is halved until the iterate stays inside (0,1)^2 and the residual
/// norm decreases.
NewtonResult newton_2d(const ResidualFn& f, double a1, double a3, const NewtonOptions& opts = {});

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

struct SuboptimalOptions {
  NewtonOptions newton;
  /// Lattice step of the fallback search, also its box [step, 1 - step]^2.
  double grid_step = 0.01;
  /// Sub-lattice refinement rounds, each dividing the step by 10.
  int refine_rounds = 2;
};

/// Solves the stationarity conditions by multistart Newton, from `start` if
/// given, else from a 9 x 9 lattice on [0.1, 0.9]^2. If no interior root
/// exists, returns the best grid-refined point of the high-SNR objective with
/// status no_interior_root. The result does not depend on rho.
AllocationSolution suboptimal_solve(const ChannelVariances& v,
                                    std::optional<std::pair<double, double>> start = std::nullopt,
                                    const SuboptimalOptions& opts = {});

enum class Objective { closed_form, monte_carlo, high_snr };

struct GridOptions {
  double step = 0.01;
  unsigned threads = 0;
  /// Monte Carlo objective only: every candidate sees the same draws.
  std::size_t n_realizations = 20000;
  std::uint64_t seed = 20240101;
};

using AllocationObjective = std::function<double(double a1, double a3)>;

/// Argmax of `objective` over {step, 2 step, ...} below 1, squared, with
/// a1 > 0.5. Ties resolve to the smallest a1, then the smallest a3.
AllocationSolution grid_search(const AllocationObjective& objective, double step, unsigned threads = 0);

AllocationSolution grid_search(const ChannelVariances& v, const SnrPoint& snr, Objective objective,
                               const GridOptions& opts = {});

/// Same lattice as grid_search; the Monte Carlo objective evaluated on a
/// prepared ensemble.
AllocationSolution grid_search(const Ensemble& ensemble, const ChannelVariances& v,
                               const SnrPoint& snr, double step, unsigned threads = 0);

/// Objective value of (a1, a3) at a given SNR.
double evaluate_objective(Objective objective, double a1, double a3, const ChannelVariances& v,
                          const SnrPoint& snr, const Ensemble* ensemble = nullptr);

/// Lattice values {step, 2 step, ...} strictly inside (lo, 1).
std::vector<double> allocation_lattice(double step, double lo = 0.0);

const char* to_string(RootStatus status);

}  // namespace noma
