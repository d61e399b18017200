// Command-line front end: validate-cdf, sweep, optimize, solve-alloc.

#include "noma/experiment.hpp"
#include "noma/power_allocation.hpp"
#include "noma/quadrature.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace {

struct FlagSet {
  std::map<std::string, std::string> values;
  std::vector<std::pair<CLI::Option*, std::string>> options;

  void add(CLI::App& app, const std::string& flag, const std::string& key, const std::string& help) {
    options.emplace_back(app.add_option(flag, values[key], help), key);
  }

  std::vector<std::pair<std::string, std::string>> given() const {
    std::vector<std::pair<std::string, std::string>> kv;
    for (const auto& [opt, key] : options)
      if (opt->count() > 0) kv.emplace_back(key, values.at(key));
    return kv;
  }
};

void add_common(CLI::App& app, FlagSet& flags) {
  flags.add(app, "--setup", "setup", "Channel setup: 1 (alpha 1,10,2) or 2 (alpha 1,2,10)");
  flags.add(app, "--alpha-sd", "alpha_sd", "Mean gain of the source-destination link");
  flags.add(app, "--alpha-sr", "alpha_sr", "Mean gain of the source-relay link");
  flags.add(app, "--alpha-rd", "alpha_rd", "Mean gain of the relay-destination link");
  flags.add(app, "--a1", "a1", "Source power fraction of x1");
  flags.add(app, "--a3", "a3", "Relay power fraction of x1");
  flags.add(app, "--snr-start", "snr_start", "First SNR point (dB)");
  flags.add(app, "--snr-stop", "snr_stop", "Last SNR point (dB)");
  flags.add(app, "--snr-step", "snr_step", "SNR spacing (dB)");
  flags.add(app, "--n,--samples", "n", "Channel realizations");
  flags.add(app, "--seed", "seed", "Master seed (default $NOMA_SEED or 20240101)");
  flags.add(app, "--out", "out", "Output CSV path (default standard output)");
  flags.add(app, "--grid-step", "grid_step", "Power-allocation lattice step");
  flags.add(app, "--threads", "threads", "Worker threads (0 = all cores)");
  flags.add(app, "--objective", "objective", "closed-form | monte-carlo | high-snr");
  flags.add(app, "--optimize", "optimize", "none | grid | suboptimal (sweep only)");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw noma::IoError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-stage power-allocation NOMA relay: simulation and analysis"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "key = value configuration file; flags override it");

  FlagSet flags;
  auto* cdf = app.add_subcommand("validate-cdf", "Empirical vs analytic CDF of the x2 SNR");
  auto* sweep = app.add_subcommand("sweep", "Ergodic sum rate versus transmit SNR");
  auto* optimize = app.add_subcommand("optimize", "Optimal and suboptimal power allocations per SNR");
  auto* solve = app.add_subcommand("solve-alloc", "Print the suboptimal (a1, a3)");
  for (auto* sub : {cdf, sweep, optimize, solve}) {
    add_common(*sub, flags);
    sub->add_option("--config", config_path, "key = value configuration file");
  }
  flags.add(*cdf, "--ks-threshold", "ks_threshold", "Maximum accepted KS distance");
  flags.add(*cdf, "--snr", "snr", "SNR point (dB)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? noma::kExitOk : noma::kExitValidation;
  }

  try {
    auto cfg = noma::default_config();
    if (!config_path.empty()) cfg = noma::parse_config(read_file(config_path), cfg);
    noma::apply_settings(cfg, flags.given());

    std::ofstream file;
    std::ostream* out = &std::cout;
    std::ostream* summary = &std::cout;
    if (!cfg.out.empty()) {
      file.open(cfg.out, std::ios::binary);
      if (!file) throw noma::IoError("cannot open '" + cfg.out + "' for writing");
      out = &file;
    } else {
      summary = &std::cerr;
    }

    int rc = noma::kExitOk;
    if (cdf->parsed()) {
      const auto report = noma::run_validate_cdf(cfg, *out);
      std::cerr << "KS statistic " << noma::format_number(report.ks) << (report.pass ? " <= " : " > ")
                << noma::format_number(cfg.ks_threshold) << '\n';
      rc = report.pass ? noma::kExitOk : noma::kExitNumeric;
    } else if (sweep->parsed()) {
      noma::run_sweep(cfg, *out);
    } else if (optimize->parsed()) {
      rc = noma::run_optimize(cfg, *out, *summary);
    } else if (solve->parsed()) {
      noma::run_solve_alloc(cfg, *out);
    }
    if (file.is_open()) {
      file.flush();
      if (!file) throw noma::IoError("write to '" + cfg.out + "' failed");
    }
    return rc;
  } catch (const noma::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return noma::kExitValidation;
  } catch (const noma::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return noma::kExitIo;
  } catch (const noma::SolverError& e) {
    std::cerr << "solver error: " << e.what() << " (best residual " << e.best_residual() << ")\n";
    return noma::kExitNumeric;
  } catch (const noma::QuadratureError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return noma::kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return noma::kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return noma::kExitNumeric;
  }
}
