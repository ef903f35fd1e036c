#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "dlbiht/config.hpp"
#include "dlbiht/dictlearn.hpp"
#include "dlbiht/metrics.hpp"
#include "dlbiht/model.hpp"
#include "dlbiht/rng.hpp"

namespace dlbiht {

enum class Method { Baseline, DlBihtL1, DlBihtL2 };

const char* to_string(Method m);

struct MethodOutcome {
  Method method = Method::Baseline;
  bool ok = true;
  std::string error;  // set when !ok
  TrialResult result;
  Matrix D_final;  // learned (or, for the baseline, initial) dictionary
};

struct TrialOutcome {
  std::vector<MethodOutcome> methods;  // baseline first when enabled, then L1, L2

  const MethodOutcome* find(Method m) const;
};

/// Methods run for a config, in output order.
std::vector<Method> selected_methods(const ExperimentConfig& cfg);

LearnConfig learn_config(const ExperimentConfig& cfg, IndicatorVariant variant);

/// One Monte Carlo trial. Every method shares the same ModelInstance and the
/// same initial dictionary. Divergence in one method marks only that method
/// as failed.
TrialOutcome run_trial(const ExperimentConfig& cfg, RngStream& rng);

struct SweepRow {
  double value;
  Method method = Method::Baseline;
  double nmse_db;  // NaN when no trial succeeded
  std::size_t trials_ok;
  std::size_t trials_total;
  std::size_t excluded;  // exact-recovery sentinels left out of the mean

  bool meets_threshold() const;  // at least 80% of trials succeeded
};

struct SweepTable {
  SweepParameter parameter;
  std::vector<SweepRow> rows;
};

/// mc_trials trials per sweep value. Trial t draws from RngStream(seed, t), so
/// results do not depend on `threads`.
SweepTable run_sweep(const ExperimentConfig& cfg, const SweepSpec& sweep, std::size_t threads = 1);

struct ConvergenceTrace {
  double mu;
  Method method = Method::Baseline;
  std::vector<double> cost;
  bool truncated = false;
};

struct ConvergenceTable {
  std::vector<ConvergenceTrace> traces;
};

/// Cost traces of every (mu, variant) pair on a single instance drawn from
/// RngStream(seed, 0).
ConvergenceTable run_convergence(const ExperimentConfig& cfg, const std::vector<double>& mu_values,
                                 std::size_t threads = 1);

// Output files. CSVs are UTF-8, LF, 10 significant digits.

/// fig1_cost.csv (iteration,mu,variant,cost) and fig1_plot.py.
std::vector<std::filesystem::path> emit_convergence(const ConvergenceTable& table,
                                                    const std::filesystem::path& out_dir);

/// fig2_nmse.csv for a T sweep, fig3_nmse.csv for an n sweep, sweep_mu_nmse.csv
/// for a mu sweep, each with a matching plot script.
std::vector<std::filesystem::path> emit_sweep(const SweepTable& table,
                                              const std::filesystem::path& out_dir);

/// single_trial.csv plus the learned dictionaries and cost traces in the
/// matrix text format.
std::vector<std::filesystem::path> emit_single(const TrialOutcome& outcome,
                                               const std::filesystem::path& out_dir);

std::string format_number(double v);

}  // namespace dlbiht
