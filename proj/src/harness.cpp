#include "dlbiht/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "dlbiht/matrix_io.hpp"
#include "dlbiht/parallel.hpp"

namespace dlbiht {

namespace fs = std::filesystem;

const char* to_string(Method m) {
  switch (m) {
    case Method::Baseline: return "baseline";
    case Method::DlBihtL1: return "dl-biht-l1";
    case Method::DlBihtL2: return "dl-biht-l2";
  }
  return "?";
}

const MethodOutcome* TrialOutcome::find(Method m) const {
  for (const auto& o : methods) {
    if (o.method == m) return &o;
  }
  return nullptr;
}

std::vector<Method> selected_methods(const ExperimentConfig& cfg) {
  std::vector<Method> out;
  if (cfg.baseline) out.push_back(Method::Baseline);
  if (cfg.variant != VariantSelection::L2) out.push_back(Method::DlBihtL1);
  if (cfg.variant != VariantSelection::L1) out.push_back(Method::DlBihtL2);
  return out;
}

LearnConfig learn_config(const ExperimentConfig& cfg, IndicatorVariant variant) {
  LearnConfig lc;
  lc.variant = variant;
  lc.mu = cfg.mu;
  lc.outer_iterations = cfg.outer_iterations;
  lc.inner_steps = cfg.inner_steps;
  lc.biht.iterations = cfg.biht_iterations;
  lc.biht.tau = cfg.tau;
  lc.biht.sparsity = cfg.effective_sparsity();
  return lc;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Dictionary initial_dictionary(const ExperimentConfig& cfg, const ModelInstance& inst,
                              RngStream& rng) {
  if (cfg.random_init) return random_dictionary(cfg.n, cfg.K, rng);
  return perturbed_dictionary(inst.D, cfg.init_perturbation, rng);
}

MethodOutcome run_baseline(const ModelInstance& inst, const Dictionary& D_init,
                           const LearnConfig& lc) {
  MethodOutcome out;
  out.method = Method::Baseline;
  const auto start = Clock::now();
  const auto rec = biht_recover_all(inst.Y, D_init.data, lc.biht);
  const Matrix Phi_hat = recover_phi(inst.A, D_init.data);
  out.result.nmse_db = nmse(inst.X, reconstruct_signals(Phi_hat, rec.codes.data));
  out.result.sign_consistency = sign_consistency(inst.Y, D_init.data, rec.codes.data);
  out.result.cost_trace = {cost_l2(D_init.data, rec.codes.data, inst.Y)};
  out.result.wall_time = seconds_since(start);
  out.D_final = D_init.data;
  return out;
}

MethodOutcome run_learning(Method method, const ModelInstance& inst, const Dictionary& D_init,
                           const LearnConfig& lc) {
  MethodOutcome out;
  out.method = method;
  const auto start = Clock::now();
  try {
    const LearnState state = learn(inst.Y, D_init, lc);
    const Matrix Phi_hat = recover_phi(inst.A, state.D.data);
    out.result.nmse_db = nmse(inst.X, reconstruct_signals(Phi_hat, state.S_hat.data));
    if (std::isnan(out.result.nmse_db) || out.result.nmse_db == std::numeric_limits<double>::infinity()) {
      throw DivergenceError(state.iteration, state.cost_history);
    }
    out.result.sign_consistency = sign_consistency(inst.Y, state.D.data, state.S_hat.data);
    out.result.cost_trace = state.cost_history;
    out.D_final = state.D.data;
  } catch (const DivergenceError& e) {
    out.ok = false;
    out.error = e.what();
    out.result.cost_trace = e.partial_history();
  } catch (const RankError& e) {
    out.ok = false;
    out.error = e.what();
  }
  out.result.wall_time = seconds_since(start);
  return out;
}

}  // namespace

TrialOutcome run_trial(const ExperimentConfig& cfg, RngStream& rng) {
  cfg.validate();
  const ModelInstance inst = synthesize(cfg, rng);
  const Dictionary D_init = initial_dictionary(cfg, inst, rng);

  TrialOutcome outcome;
  for (const Method m : selected_methods(cfg)) {
    if (m == Method::Baseline) {
      outcome.methods.push_back(run_baseline(inst, D_init, learn_config(cfg, IndicatorVariant::L2)));
    } else {
      const auto variant = m == Method::DlBihtL1 ? IndicatorVariant::L1 : IndicatorVariant::L2;
      outcome.methods.push_back(run_learning(m, inst, D_init, learn_config(cfg, variant)));
    }
  }
  return outcome;
}

bool SweepRow::meets_threshold() const {
  return trials_total > 0 && 5 * trials_ok >= 4 * trials_total;
}

SweepTable run_sweep(const ExperimentConfig& cfg, const SweepSpec& sweep, std::size_t threads) {
  sweep.validate();
  cfg.validate();

  SweepTable table{sweep.parameter, {}};
  for (const double value : sweep.values) {
    ExperimentConfig point = cfg;
    switch (sweep.parameter) {
      case SweepParameter::T: point.T = static_cast<std::size_t>(value); break;
      case SweepParameter::n: point.n = static_cast<std::size_t>(value); break;
      case SweepParameter::mu: point.mu = value; break;
    }
    point.validate();

    std::vector<TrialOutcome> trials(point.mc_trials);
    parallel_for(point.mc_trials, threads, [&](std::size_t t) {
      RngStream rng(point.seed, t);
      trials[t] = run_trial(point, rng);
    });

    // Reduction walks trials in index order, independent of scheduling.
    for (const Method m : selected_methods(point)) {
      std::vector<TrialResult> ok;
      for (const auto& trial : trials) {
        const auto* o = trial.find(m);
        if (o && o->ok) ok.push_back(o->result);
      }
      SweepRow row{value, m, std::numeric_limits<double>::quiet_NaN(), ok.size(), point.mc_trials, 0};
      if (!ok.empty()) {
        try {
          const auto avg = average_nmse(ok);
          row.nmse_db = avg.mean_db;
          row.excluded = avg.excluded;
        } catch (const ParameterError&) {
          row.excluded = ok.size();
        }
      }
      table.rows.push_back(row);
    }
  }
  return table;
}

ConvergenceTable run_convergence(const ExperimentConfig& cfg, const std::vector<double>& mu_values,
                                 std::size_t threads) {
  cfg.validate();
  if (mu_values.empty()) throw ParameterError("run_convergence: no mu values");
  for (const double mu : mu_values) {
    if (!(mu >= 0.0) || !std::isfinite(mu)) throw ParameterError("run_convergence: mu must be >= 0");
  }

  RngStream rng(cfg.seed, 0);
  const ModelInstance inst = synthesize(cfg, rng);
  const Dictionary D_init = initial_dictionary(cfg, inst, rng);

  std::vector<ConvergenceTrace> jobs;
  for (const double mu : mu_values) {
    for (const Method m : selected_methods(cfg)) {
      if (m != Method::Baseline) jobs.push_back({mu, m, {}, false});
    }
  }
  parallel_for(jobs.size(), threads, [&](std::size_t j) {
    auto& job = jobs[j];
    ExperimentConfig point = cfg;
    point.mu = job.mu;
    const auto variant = job.method == Method::DlBihtL1 ? IndicatorVariant::L1 : IndicatorVariant::L2;
    try {
      job.cost = learn(inst.Y, D_init, learn_config(point, variant)).cost_history;
    } catch (const DivergenceError& e) {
      job.cost = e.partial_history();
      job.truncated = true;
    }
  });
  return ConvergenceTable{std::move(jobs)};
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

namespace {

std::ofstream open_output(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  return os;
}

void finish(std::ofstream& os, const fs::path& path) {
  os.flush();
  if (!os) throw IoError("write failed: " + path.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string() +
                  (ec ? ": " + ec.message() : std::string()));
  }
}

void write_text(const fs::path& path, const std::string& text) {
  auto os = open_output(path);
  os << text;
  finish(os, path);
}

std::string convergence_script() {
  return R"PY(#!/usr/bin/env python3
"""Cost function versus iteration, one line per (variant, mu)."""
import csv
import os
import sys
from collections import defaultdict

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
traces = defaultdict(list)
with open(os.path.join(here, "fig1_cost.csv"), newline="") as f:
    for row in csv.DictReader(f):
        traces[(row["variant"], float(row["mu"]))].append((int(row["iteration"]), float(row["cost"])))

fig, ax = plt.subplots(figsize=(6, 4))
for (variant, mu), pts in sorted(traces.items()):
    pts.sort()
    ax.plot([p[0] for p in pts], [p[1] for p in pts], label=f"{variant.upper()}, mu={mu:g}")
ax.set_xlabel("iteration")
ax.set_ylabel("J(D)")
ax.set_yscale("log")
ax.grid(True, alpha=0.3)
ax.legend()
fig.tight_layout()
out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(here, "fig1_cost.png")
fig.savefig(out, dpi=150)
print(out)
)PY";
}

void replace_all(std::string& text, const std::string& key, const std::string& value) {
  for (auto pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + value.size())) {
    text.replace(pos, key.size(), value);
  }
}

std::string sweep_script(const std::string& csv_name, const std::string& x_column,
                         const std::string& x_label, const std::string& png_name) {
  std::string script = R"PY(#!/usr/bin/env python3
"""Average NMSE versus @LABEL@, one line per method."""
import csv
import math
import os
import sys
from collections import defaultdict

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
series = defaultdict(list)
with open(os.path.join(here, "@CSV@"), newline="") as f:
    for row in csv.DictReader(f):
        y = float(row["nmse_db"])
        if not math.isnan(y):
            series[row["variant"]].append((float(row["@COLUMN@"]), y))

fig, ax = plt.subplots(figsize=(6, 4))
for variant, pts in sorted(series.items()):
    pts.sort()
    ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=variant.upper())
ax.set_xlabel("@LABEL@")
ax.set_ylabel("NMSE (dB)")
ax.grid(True, alpha=0.3)
ax.legend()
fig.tight_layout()
out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(here, "@PNG@")
fig.savefig(out, dpi=150)
print(out)
)PY";
  replace_all(script, "@LABEL@", x_label);
  replace_all(script, "@CSV@", csv_name);
  replace_all(script, "@COLUMN@", x_column);
  replace_all(script, "@PNG@", png_name);
  return script;
}

}  // namespace

std::vector<fs::path> emit_convergence(const ConvergenceTable& table, const fs::path& out_dir) {
  ensure_dir(out_dir);
  const fs::path csv = out_dir / "fig1_cost.csv";
  auto os = open_output(csv);
  os << "iteration,mu,variant,cost\n";
  for (const auto& trace : table.traces) {
    for (std::size_t i = 0; i < trace.cost.size(); ++i) {
      os << (i + 1) << ',' << format_number(trace.mu) << ',' << to_string(trace.method) << ','
         << format_number(trace.cost[i]) << '\n';
    }
  }
  finish(os, csv);
  const fs::path script = out_dir / "fig1_plot.py";
  write_text(script, convergence_script());
  return {csv, script};
}

std::vector<fs::path> emit_sweep(const SweepTable& table, const fs::path& out_dir) {
  ensure_dir(out_dir);
  std::string stem, column, label;
  switch (table.parameter) {
    case SweepParameter::T: stem = "fig2"; column = "T"; label = "number of training signals T"; break;
    case SweepParameter::n: stem = "fig3"; column = "n"; label = "number of sign measurements n"; break;
    case SweepParameter::mu: stem = "sweep_mu"; column = "mu"; label = "step size mu"; break;
  }
  const fs::path csv = out_dir / (stem + "_nmse.csv");
  auto os = open_output(csv);
  os << column << ",variant,nmse_db,trials_ok\n";
  for (const auto& row : table.rows) {
    os << format_number(row.value) << ',' << to_string(row.method) << ','
       << format_number(row.nmse_db) << ',' << row.trials_ok << '\n';
  }
  finish(os, csv);
  const fs::path script = out_dir / (stem + "_plot.py");
  write_text(script, sweep_script(csv.filename().string(), column, label, stem + "_nmse.png"));
  return {csv, script};
}

std::vector<fs::path> emit_single(const TrialOutcome& outcome, const fs::path& out_dir) {
  ensure_dir(out_dir);
  std::vector<fs::path> written;
  const fs::path csv = out_dir / "single_trial.csv";
  auto os = open_output(csv);
  os << "variant,ok,nmse_db,sign_consistency,final_cost\n";
  for (const auto& m : outcome.methods) {
    const double final_cost = m.result.cost_trace.empty()
                                  ? std::numeric_limits<double>::quiet_NaN()
                                  : m.result.cost_trace.back();
    os << to_string(m.method) << ',' << (m.ok ? 1 : 0) << ','
       << format_number(m.ok ? m.result.nmse_db : std::numeric_limits<double>::quiet_NaN()) << ','
       << format_number(m.result.sign_consistency) << ',' << format_number(final_cost) << '\n';
  }
  finish(os, csv);
  written.push_back(csv);
  for (const auto& m : outcome.methods) {
    const std::string name = to_string(m.method);
    if (m.D_final.size() > 0) {
      written.push_back(out_dir / ("D_" + name + ".txt"));
      save_matrix(written.back(), m.D_final);
    }
    written.push_back(out_dir / ("cost_" + name + ".txt"));
    save_trace(written.back(), m.result.cost_trace);
  }
  return written;
}

}  // namespace dlbiht
