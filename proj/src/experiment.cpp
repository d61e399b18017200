#include "noma/experiment.hpp"

#include "noma/analysis.hpp"
#include "noma/monte_carlo.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <sstream>

namespace noma {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  const auto* first = value.data();
  const auto* last = value.data() + value.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last || !std::isfinite(v)) {
    throw ConfigError("invalid number for '" + key + "': '" + value + "'");
  }
  return v;
}

template <typename Int>
Int parse_integer(const std::string& key, const std::string& value) {
  Int v{};
  const auto* last = value.data() + value.size();
  const auto res = std::from_chars(value.data(), last, v);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw ConfigError("invalid integer for '" + key + "': '" + value + "'");
  }
  return v;
}

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

const char* to_string(OptimizeMode m) {
  switch (m) {
    case OptimizeMode::none: return "none";
    case OptimizeMode::grid: return "grid";
    case OptimizeMode::suboptimal: return "suboptimal";
  }
  return "none";
}

const char* to_string(Objective o) {
  switch (o) {
    case Objective::closed_form: return "closed-form";
    case Objective::monte_carlo: return "monte-carlo";
    case Objective::high_snr: return "high-snr";
  }
  return "closed-form";
}

ChannelVariances setup_variances(int setup) {
  switch (setup) {
    case 1: return {1.0, 10.0, 2.0};
    case 2: return {1.0, 2.0, 10.0};
    default: throw ConfigError("setup must be 1 or 2, got " + std::to_string(setup));
  }
}

void apply_one(ExperimentConfig& cfg, const std::string& raw_key, const std::string& value) {
  const auto key = normalize_key(raw_key);
  if (key == "setup") {
    if (value == "custom") {
      cfg.setup.reset();
    } else {
      const int s = parse_integer<int>(key, value);
      cfg.variances = setup_variances(s);
      cfg.setup = s;
    }
  } else if (key == "alpha_sd") {
    cfg.variances.alpha_sd = parse_double(key, value);
    cfg.setup.reset();
  } else if (key == "alpha_sr") {
    cfg.variances.alpha_sr = parse_double(key, value);
    cfg.setup.reset();
  } else if (key == "alpha_rd") {
    cfg.variances.alpha_rd = parse_double(key, value);
    cfg.setup.reset();
  } else if (key == "a1") {
    cfg.a1 = parse_double(key, value);
  } else if (key == "a3") {
    cfg.a3 = parse_double(key, value);
  } else if (key == "optimize") {
    if (value == "none") cfg.optimize = OptimizeMode::none;
    else if (value == "grid") cfg.optimize = OptimizeMode::grid;
    else if (value == "suboptimal") cfg.optimize = OptimizeMode::suboptimal;
    else throw ConfigError("optimize must be none, grid or suboptimal, got '" + value + "'");
  } else if (key == "objective") {
    if (value == "closed-form") cfg.objective = Objective::closed_form;
    else if (value == "monte-carlo") cfg.objective = Objective::monte_carlo;
    else if (value == "high-snr") cfg.objective = Objective::high_snr;
    else throw ConfigError("objective must be closed-form, monte-carlo or high-snr, got '" + value + "'");
  } else if (key == "snr_start") {
    cfg.snr_start = parse_double(key, value);
  } else if (key == "snr_stop") {
    cfg.snr_stop = parse_double(key, value);
  } else if (key == "snr_step") {
    cfg.snr_step = parse_double(key, value);
  } else if (key == "snr") {
    cfg.snr_db = parse_double(key, value);
  } else if (key == "n" || key == "samples") {
    cfg.n = parse_integer<std::size_t>(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_integer<std::uint64_t>(key, value);
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "ks_threshold") {
    cfg.ks_threshold = parse_double(key, value);
  } else if (key == "grid_step") {
    cfg.grid_step = parse_double(key, value);
  } else if (key == "threads") {
    cfg.threads = parse_integer<unsigned>(key, value);
  } else {
    throw ConfigError("unknown configuration key '" + raw_key + "'");
  }
}

void write_row(std::ostream& os, std::initializer_list<std::string> fields) {
  bool first = true;
  for (const auto& f : fields) {
    if (!first) os << ',';
    os << f;
    first = false;
  }
  os << '\n';
}

}  // namespace

std::uint64_t default_seed() {
  constexpr std::uint64_t fallback = 20240101;
  const char* env = std::getenv("NOMA_SEED");
  if (env == nullptr) return fallback;
  std::uint64_t v = 0;
  const std::string s(env);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  return (res.ec == std::errc{} && res.ptr == s.data() + s.size()) ? v : fallback;
}

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  cfg.seed = default_seed();
  return cfg;
}

void apply_settings(ExperimentConfig& cfg, const std::vector<std::pair<std::string, std::string>>& kv) {
  for (const auto& [k, v] : kv)
    if (normalize_key(k) == "setup") apply_one(cfg, k, v);
  for (const auto& [k, v] : kv)
    if (normalize_key(k) != "setup") apply_one(cfg, k, v);
}

std::vector<std::pair<std::string, std::string>> parse_settings(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    kv.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return kv;
}

ExperimentConfig parse_config(const std::string& text, ExperimentConfig base) {
  apply_settings(base, parse_settings(text));
  return base;
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  if (cfg.setup) {
    os << "setup = " << *cfg.setup << '\n';
  } else {
    os << "setup = custom\n";
    os << "alpha_sd = " << format_number(cfg.variances.alpha_sd) << '\n';
    os << "alpha_sr = " << format_number(cfg.variances.alpha_sr) << '\n';
    os << "alpha_rd = " << format_number(cfg.variances.alpha_rd) << '\n';
  }
  os << "a1 = " << format_number(cfg.a1) << '\n';
  os << "a3 = " << format_number(cfg.a3) << '\n';
  os << "optimize = " << to_string(cfg.optimize) << '\n';
  os << "objective = " << to_string(cfg.objective) << '\n';
  os << "snr_start = " << format_number(cfg.snr_start) << '\n';
  os << "snr_stop = " << format_number(cfg.snr_stop) << '\n';
  os << "snr_step = " << format_number(cfg.snr_step) << '\n';
  os << "snr = " << format_number(cfg.snr_db) << '\n';
  os << "n = " << cfg.n << '\n';
  os << "seed = " << cfg.seed << '\n';
  if (!cfg.out.empty()) os << "out = " << cfg.out << '\n';
  os << "ks_threshold = " << format_number(cfg.ks_threshold) << '\n';
  os << "grid_step = " << format_number(cfg.grid_step) << '\n';
  os << "threads = " << cfg.threads << '\n';
  return os.str();
}

void validate(const ExperimentConfig& cfg) {
  try {
    cfg.variances.validate();
    (void)PowerAllocation::make(cfg.a1, cfg.a3);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (cfg.n == 0) throw ConfigError("n must be at least 1");
  if (!(cfg.snr_step > 0.0)) throw ConfigError("snr_step must be positive");
  if (!(cfg.snr_stop >= cfg.snr_start)) throw ConfigError("snr_stop must not be below snr_start");
  if (!(cfg.ks_threshold > 0.0)) throw ConfigError("ks_threshold must be positive");
  if (!(cfg.grid_step > 0.0 && cfg.grid_step <= 0.1)) throw ConfigError("grid_step must lie in (0, 0.1]");
}

std::vector<SnrPoint> snr_grid(const ExperimentConfig& cfg) {
  std::vector<SnrPoint> grid;
  const double span = cfg.snr_stop - cfg.snr_start;
  const auto count = static_cast<std::size_t>(std::floor(span / cfg.snr_step + 1e-9)) + 1;
  for (std::size_t i = 0; i < count; ++i) {
    grid.push_back(SnrPoint::from_db(cfg.snr_start + static_cast<double>(i) * cfg.snr_step));
  }
  return grid;
}

namespace {

MonteCarloConfig mc_config(const ExperimentConfig& cfg, PowerAllocation alloc) {
  MonteCarloConfig mc;
  mc.n_realizations = cfg.n;
  mc.seed = cfg.seed;
  mc.variances = cfg.variances;
  mc.alloc = alloc;
  mc.snr_grid = snr_grid(cfg);
  mc.threads = cfg.threads;
  return mc;
}

}  // namespace

CdfReport run_validate_cdf(const ExperimentConfig& cfg, std::ostream& csv) {
  validate(cfg);
  const auto alloc = PowerAllocation::make(cfg.a1, cfg.a3);
  const auto snr = SnrPoint::from_db(cfg.snr_db);
  const auto ecdf = empirical_cdf_y(mc_config(cfg, alloc), snr);
  const AnalysisParams p{alloc, cfg.variances, snr};
  auto analytic = [&](double y) { return 1.0 - ccdf_y(y, p); };

  CdfReport report;
  report.ks = ecdf.ks_distance(analytic);
  report.pass = report.ks <= cfg.ks_threshold;

  write_row(csv, {"y", "analytic_cdf", "empirical_cdf", "abs_diff"});
  constexpr int kRows = 200;
  const double y_max = ecdf.quantile(0.999);
  for (int i = 0; i <= kRows; ++i) {
    const double y = y_max * i / kRows;
    const double fa = analytic(y);
    const double fe = ecdf(y);
    write_row(csv, {format_number(y), format_number(fa), format_number(fe), format_number(std::abs(fa - fe))});
  }
  write_row(csv, {"ks_statistic", format_number(report.ks), format_number(cfg.ks_threshold),
                  report.pass ? "1" : "0"});
  return report;
}

void run_sweep(const ExperimentConfig& cfg, std::ostream& csv) {
  validate(cfg);
  auto mc = mc_config(cfg, PowerAllocation::make(cfg.a1, cfg.a3));
  write_row(csv, {"rho_db", "mc_sum_rate", "mc_stderr", "closed_form", "highsnr_approx", "baseline_mc"});

  std::vector<SweepRow> rows;
  if (cfg.optimize == OptimizeMode::none) {
    rows = sweep(mc).rows;
  } else {
    // Allocation re-chosen per SNR point; the draws stay common to all points.
    AllocationSolution sub;
    if (cfg.optimize == OptimizeMode::suboptimal) sub = suboptimal_solve(cfg.variances);
    for (const auto& snr : mc.snr_grid) {
      AllocationSolution sol = sub;
      if (cfg.optimize == OptimizeMode::grid) {
        GridOptions g;
        g.step = cfg.grid_step;
        g.threads = cfg.threads;
        g.n_realizations = cfg.n;
        g.seed = cfg.seed;
        sol = grid_search(cfg.variances, snr, cfg.objective, g);
      }
      auto point = mc;
      point.alloc = PowerAllocation::relaxed(sol.a1, sol.a3);
      point.snr_grid = {snr};
      rows.push_back(sweep(point).rows.front());
    }
  }
  for (const auto& r : rows) {
    write_row(csv, {format_number(r.rho_db), format_number(r.mc_mean_sum_rate), format_number(r.mc_std_error),
                    format_number(r.closed_form), format_number(r.highsnr_approx),
                    format_number(r.baseline_mc_mean)});
  }
}

std::vector<OptimizeRow> optimize_rows(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto grid = snr_grid(cfg);
  const auto ensemble = draw_ensemble(cfg.variances, cfg.n, cfg.seed, cfg.threads);

  std::optional<AllocationSolution> sub;
  try {
    SuboptimalOptions so;
    so.grid_step = cfg.grid_step;
    sub = suboptimal_solve(cfg.variances, std::nullopt, so);
  } catch (const SolverError&) {
    sub.reset();
  }

  const auto baseline_a1s = allocation_lattice(cfg.grid_step, 0.5);
  std::vector<OptimizeRow> rows;
  for (const auto& snr : grid) {
    OptimizeRow row;
    row.rho_db = snr.rho_db;
    if (cfg.objective == Objective::monte_carlo) {
      row.optimal = grid_search(ensemble, cfg.variances, snr, cfg.grid_step, cfg.threads);
    } else {
      const auto objective = cfg.objective;
      row.optimal = grid_search(
          [&](double a1, double a3) { return evaluate_objective(objective, a1, a3, cfg.variances, snr); },
          cfg.grid_step, cfg.threads);
    }
    if (sub) {
      row.suboptimal = *sub;
      row.sr_subopt = evaluate_objective(cfg.objective, sub->a1, sub->a3, cfg.variances, snr, &ensemble);
    } else {
      row.failed = true;
      row.sr_subopt = std::numeric_limits<double>::quiet_NaN();
    }
    std::vector<double> base(baseline_a1s.size());
    parallel_for(base.size(), cfg.threads,
                 [&](std::size_t i) { base[i] = mean_baseline_sum_rate(ensemble, baseline_a1s[i], snr); });
    const auto best = std::max_element(base.begin(), base.end());
    row.baseline_opt_sr = *best;
    row.baseline_a1 = baseline_a1s[static_cast<std::size_t>(best - base.begin())];
    rows.push_back(row);
  }
  return rows;
}

int run_optimize(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& summary) {
  const auto rows = optimize_rows(cfg);
  write_row(csv, {"rho_db", "a1_opt", "a3_opt", "sr_opt", "a1_subopt", "a3_subopt", "sr_subopt",
                  "baseline_opt_sr", "subopt_status"});
  bool any_failed = false;
  for (const auto& r : rows) {
    any_failed = any_failed || r.failed;
    const std::string status = r.failed ? "failed" : to_string(r.suboptimal.status);
    write_row(csv, {format_number(r.rho_db), format_number(r.optimal.a1), format_number(r.optimal.a3),
                    format_number(r.optimal.objective), format_number(r.suboptimal.a1),
                    format_number(r.suboptimal.a3), format_number(r.sr_subopt),
                    format_number(r.baseline_opt_sr), status});
  }
  summary << "objective: " << to_string(cfg.objective) << ", grid step " << format_number(cfg.grid_step)
          << "\n";
  if (!rows.empty() && !rows.front().failed) {
    const auto& s = rows.front().suboptimal;
    summary << "suboptimal allocation: a1=" << format_number(s.a1) << " a3=" << format_number(s.a3)
            << " (" << to_string(s.status) << (s.violates_sic_order ? ", violates SIC order" : "") << ")\n";
  } else {
    summary << "suboptimal allocation: solver failed\n";
  }
  for (const auto& r : rows) {
    summary << "  " << format_number(r.rho_db) << " dB: optimum (" << format_number(r.optimal.a1) << ", "
            << format_number(r.optimal.a3) << ") -> " << format_number(r.optimal.objective)
            << ", suboptimal -> " << format_number(r.sr_subopt) << ", baseline (a1="
            << format_number(r.baseline_a1) << ") -> " << format_number(r.baseline_opt_sr) << "\n";
  }
  return any_failed ? kExitNumeric : kExitOk;
}

void run_solve_alloc(const ExperimentConfig& cfg, std::ostream& out) {
  try {
    cfg.variances.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  SuboptimalOptions so;
  so.grid_step = cfg.grid_step;
  const auto s = suboptimal_solve(cfg.variances, std::nullopt, so);
  out << "a1=" << format_number(s.a1) << " a3=" << format_number(s.a3) << " status=" << to_string(s.status)
      << (s.violates_sic_order ? " violates_sic_order" : "") << '\n';
}

}  // namespace noma
