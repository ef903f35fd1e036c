#include "dlbiht/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "dlbiht/types.hpp"

namespace dlbiht {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size() || !std::isfinite(v)) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ParameterError("config key '" + key + "': not a number: '" + value + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    if (value.empty() || value[0] == '-') throw std::invalid_argument(value);
    std::size_t used = 0;
    const auto v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ParameterError("config key '" + key + "': not a non-negative integer: '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ParameterError("config key '" + key + "': not a boolean: '" + value + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
  if (out.empty()) throw ParameterError("config key '" + key + "': empty list");
  return out;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

}  // namespace

VariantSelection parse_variant(const std::string& s) {
  if (s == "l1" || s == "L1") return VariantSelection::L1;
  if (s == "l2" || s == "L2") return VariantSelection::L2;
  if (s == "both") return VariantSelection::Both;
  throw ParameterError("variant must be one of l1, l2, both; got '" + s + "'");
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "m") cfg.m = parse_u64(key, value);
  else if (key == "n") cfg.n = parse_u64(key, value);
  else if (key == "K") cfg.K = parse_u64(key, value);
  else if (key == "T") cfg.T = parse_u64(key, value);
  else if (key == "p") cfg.p = parse_double(key, value);
  else if (key == "sigma_r") cfg.sigma_r = parse_double(key, value);
  else if (key == "sigma_n") cfg.sigma_n = parse_double(key, value);
  else if (key == "mu") cfg.mu = parse_double(key, value);
  else if (key == "outer_iterations") cfg.outer_iterations = parse_u64(key, value);
  else if (key == "inner_steps") cfg.inner_steps = parse_u64(key, value);
  else if (key == "biht_iterations") cfg.biht_iterations = parse_u64(key, value);
  else if (key == "tau") cfg.tau = parse_double(key, value);
  else if (key == "sparsity") cfg.sparsity = parse_u64(key, value);
  else if (key == "init_perturbation") cfg.init_perturbation = parse_double(key, value);
  else if (key == "random_init") cfg.random_init = parse_bool(key, value);
  else if (key == "mc_trials") cfg.mc_trials = parse_u64(key, value);
  else if (key == "seed") cfg.seed = parse_u64(key, value);
  else if (key == "variant") cfg.variant = parse_variant(value);
  else if (key == "baseline") cfg.baseline = parse_bool(key, value);
  else if (key == "t_values") cfg.t_values = parse_list(key, value);
  else if (key == "n_values") cfg.n_values = parse_list(key, value);
  else if (key == "mu_values") cfg.mu_values = parse_list(key, value);
  else throw ParameterError("unknown config key '" + key + "'");
}

void parse_config(std::istream& is, ExperimentConfig& cfg) {
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParameterError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config " + path.string());
  ExperimentConfig cfg;
  parse_config(is, cfg);
  return cfg;
}

std::size_t ExperimentConfig::effective_sparsity() const {
  if (sparsity != 0) return sparsity;
  const auto k = static_cast<std::size_t>(std::ceil(3.0 * p * static_cast<double>(K) - 1e-9));
  return std::min(K, std::max<std::size_t>(2, k));
}

void ExperimentConfig::validate() const {
  require(m >= 1 && n >= 1 && K >= 1 && T >= 1, "m, n, K, T must be >= 1");
  require(p > 0.0 && p < 1.0, "p must lie in (0, 1)");
  require(sigma_r > 0.0, "sigma_r must be positive");
  require(sigma_n >= 0.0, "sigma_n must be non-negative");
  require(mu >= 0.0, "mu must be non-negative");
  require(outer_iterations >= 1, "outer_iterations must be >= 1");
  require(inner_steps >= 1, "inner_steps must be >= 1");
  require(biht_iterations >= 1, "biht_iterations must be >= 1");
  require(tau > 0.0, "tau must be positive");
  require(sparsity <= K, "sparsity must not exceed K");
  require(init_perturbation >= 0.0, "init_perturbation must be non-negative");
  require(mc_trials >= 1, "mc_trials must be >= 1");
}

const char* to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::T: return "T";
    case SweepParameter::n: return "n";
    case SweepParameter::mu: return "mu";
  }
  return "?";
}

void SweepSpec::validate() const {
  require(!values.empty(), "sweep needs at least one value");
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (i > 0) require(v > values[i - 1], "sweep values must be strictly increasing");
    if (parameter == SweepParameter::mu) {
      require(v >= 0.0, "mu sweep values must be non-negative");
    } else {
      require(v >= 1.0 && v == std::floor(v),
              std::string("sweep values for ") + to_string(parameter) + " must be positive integers");
    }
  }
}

}  // namespace dlbiht
