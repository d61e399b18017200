#pragma once

#include "noma/channel.hpp"
#include "noma/link.hpp"
#include "noma/power_allocation.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace noma {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitNumeric = 2,
  kExitIo = 3,
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OptimizeMode { none, grid, suboptimal };

/// Default seed: $NOMA_SEED if set and numeric, else 20240101.
std::uint64_t default_seed();

struct ExperimentConfig {
  /// 1: alpha = (1, 10, 2); 2: alpha = (1, 2, 10). Explicit alphas override.
  std::optional<int> setup = 1;
  ChannelVariances variances{1.0, 10.0, 2.0};
  double a1 = 0.95;
  double a3 = 0.05;
  OptimizeMode optimize = OptimizeMode::none;
  Objective objective = Objective::closed_form;
  double snr_start = 0.0;
  double snr_stop = 50.0;
  double snr_step = 5.0;
  /// Single SNR point of validate-cdf, in dB.
  double snr_db = 20.0;
  std::size_t n = 20000;
  std::uint64_t seed = 20240101;
  std::string out;
  double ks_threshold = 0.01;
  double grid_step = 0.01;
  unsigned threads = 0;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

ExperimentConfig default_config();

/// Applies key=value settings in order, except that `setup` is applied
/// before any explicit alpha. Throws ConfigError on unknown keys or bad
/// values.
void apply_settings(ExperimentConfig& cfg, const std::vector<std::pair<std::string, std::string>>& kv);

/// Flat `key = value` text, '#' comments, blank lines allowed.
std::vector<std::pair<std::string, std::string>> parse_settings(const std::string& text);
ExperimentConfig parse_config(const std::string& text, ExperimentConfig base = default_config());
std::string serialize_config(const ExperimentConfig& cfg);

/// Checks every component invariant. Throws ConfigError.
void validate(const ExperimentConfig& cfg);

std::vector<SnrPoint> snr_grid(const ExperimentConfig& cfg);

/// Shortest decimal text that parses back to exactly `v` (up to 17
/// significant digits), independent of the global locale.
std::string format_number(double v);

struct CdfReport {
  double ks = 0.0;
  bool pass = false;
};

/// Columns y, analytic_cdf, empirical_cdf, abs_diff; footer row
/// ks_statistic,<D>,<threshold>,<pass>.
CdfReport run_validate_cdf(const ExperimentConfig& cfg, std::ostream& csv);

void run_sweep(const ExperimentConfig& cfg, std::ostream& csv);

struct OptimizeRow {
  double rho_db = 0.0;
  AllocationSolution optimal;
  AllocationSolution suboptimal;
  double sr_subopt = 0.0;
  double baseline_a1 = 0.0;
  double baseline_opt_sr = 0.0;
  bool failed = false;
};

/// Grid optimum and suboptimal allocation per SNR point, plus the baseline
/// maximized over a1 by Monte Carlo on the lattice of the grid step.
std::vector<OptimizeRow> optimize_rows(const ExperimentConfig& cfg);

/// Writes the CSV and a summary; returns kExitNumeric if any row failed.
int run_optimize(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& summary);

void run_solve_alloc(const ExperimentConfig& cfg, std::ostream& out);

}  // namespace noma
