// Experiment driver: convergence traces, T/n sweeps, and single trials.
//
// Exit codes: 0 success, 1 parameter error, 2 numeric divergence beyond the
// failed-trial threshold, 3 I/O error.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "dlbiht/config.hpp"
#include "dlbiht/harness.hpp"

namespace {

using namespace dlbiht;

enum ExitCode { kOk = 0, kParameter = 1, kDivergence = 2, kIo = 3 };

struct CommonOptions {
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  std::string variant;
  bool no_baseline = false;
  std::size_t threads = 1;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, CommonOptions& opt) {
  sub->add_option("--config", opt.config_path, "key=value experiment config file")
      ->check(CLI::ExistingFile);
  sub->add_option("--seed", opt.seed, "master seed")->required();
  sub->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
  sub->add_option("--variant", opt.variant, "l1, l2 or both")
      ->check(CLI::IsMember({"l1", "l2", "both"}));
  sub->add_flag("--no-baseline", opt.no_baseline, "skip the no-learning baseline");
  sub->add_option("--threads", opt.threads, "worker threads")->capture_default_str()
      ->check(CLI::PositiveNumber);
  sub->add_option("--set", opt.overrides, "override a config key, e.g. --set T=500");
}

ExperimentConfig resolve(const CommonOptions& opt) {
  ExperimentConfig cfg = opt.config_path.empty() ? ExperimentConfig{} : load_config(opt.config_path);
  for (const auto& kv : opt.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ParameterError("--set expects key=value, got '" + kv + "'");
    apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  cfg.seed = opt.seed;
  if (!opt.variant.empty()) cfg.variant = parse_variant(opt.variant);
  if (opt.no_baseline) cfg.baseline = false;
  cfg.validate();
  return cfg;
}

void report(const std::vector<std::filesystem::path>& files) {
  for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
}

int run_sweep_command(const CommonOptions& opt, SweepParameter parameter) {
  const ExperimentConfig cfg = resolve(opt);
  const SweepSpec spec{parameter, parameter == SweepParameter::T ? cfg.t_values : cfg.n_values};
  const SweepTable table = run_sweep(cfg, spec, opt.threads);
  int code = kOk;
  for (const auto& row : table.rows) {
    std::cout << to_string(parameter) << '=' << format_number(row.value) << ' '
              << to_string(row.method) << " nmse_db=" << format_number(row.nmse_db)
              << " ok=" << row.trials_ok << '/' << row.trials_total << '\n';
    if (!row.meets_threshold()) code = kDivergence;
  }
  report(emit_sweep(table, opt.out_dir));
  if (code != kOk) std::cerr << "error: fewer than 80% of trials succeeded for some rows\n";
  return code;
}

int run_convergence_command(const CommonOptions& opt) {
  const ExperimentConfig cfg = resolve(opt);
  const ConvergenceTable table = run_convergence(cfg, cfg.mu_values, opt.threads);
  int code = kOk;
  for (const auto& t : table.traces) {
    if (t.truncated) code = kDivergence;
    std::cout << to_string(t.method) << " mu=" << format_number(t.mu) << " iterations="
              << t.cost.size() << " final_cost="
              << (t.cost.empty() ? std::string("n/a") : format_number(t.cost.back()))
              << (t.truncated ? " (diverged, truncated)" : "") << '\n';
  }
  report(emit_convergence(table, opt.out_dir));
  return code;
}

int run_single_command(const CommonOptions& opt) {
  const ExperimentConfig cfg = resolve(opt);
  RngStream rng(cfg.seed, 0);
  const TrialOutcome outcome = run_trial(cfg, rng);
  int code = kOk;
  for (const auto& m : outcome.methods) {
    std::cout << to_string(m.method);
    if (m.ok) {
      std::cout << " nmse_db=" << format_number(m.result.nmse_db)
                << " sign_consistency=" << format_number(m.result.sign_consistency)
                << " wall_time_s=" << format_number(m.result.wall_time) << '\n';
    } else {
      std::cout << " FAILED: " << m.error << '\n';
      code = kDivergence;
    }
  }
  report(emit_single(outcome, opt.out_dir));
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dictionary learning for blind one-bit compressed sensing (DL-BIHT)"};
  app.require_subcommand(1);

  CommonOptions conv_opt, sweep_t_opt, sweep_n_opt, single_opt;
  auto* conv = app.add_subcommand("convergence", "cost traces for each mu in mu_values");
  auto* sweep_t = app.add_subcommand("sweep-t", "NMSE versus number of training signals");
  auto* sweep_n = app.add_subcommand("sweep-n", "NMSE versus number of sign measurements");
  auto* single = app.add_subcommand("single", "one trial; writes learned dictionaries");
  add_common(conv, conv_opt);
  add_common(sweep_t, sweep_t_opt);
  add_common(sweep_n, sweep_n_opt);
  add_common(single, single_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kParameter;
  }

  try {
    if (*conv) return run_convergence_command(conv_opt);
    if (*sweep_t) return run_sweep_command(sweep_t_opt, SweepParameter::T);
    if (*sweep_n) return run_sweep_command(sweep_n_opt, SweepParameter::n);
    if (*single) return run_single_command(single_opt);
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return kParameter;
  } catch (const RankError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return kParameter;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const DivergenceError& e) {
    std::cerr << "numeric divergence: " << e.what() << '\n';
    return kDivergence;
  } catch (const NumericError& e) {
    std::cerr << "numeric divergence: " << e.what() << '\n';
    return kDivergence;
  }
  return kOk;
}
