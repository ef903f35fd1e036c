#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace dlbiht {

enum class VariantSelection { L1, L2, Both };

/// Every scalar of the synthetic experiment. Defaults are the desk-scale
/// reproduction settings (m=50, n=100, K=100, T=100, p=0.01, ...).
struct ExperimentConfig {
  std::size_t m = 50;
  std::size_t n = 100;
  std::size_t K = 100;
  std::size_t T = 100;
  double p = 0.01;
  double sigma_r = 1.0;
  double sigma_n = 0.01;
  double mu = 1.0;
  std::size_t outer_iterations = 40;
  std::size_t inner_steps = 1;
  std::size_t biht_iterations = 20;
  double tau = 1.0;
  std::size_t sparsity = 0;  // 0 selects max(2, ceil(3 p K))
  double init_perturbation = 0.1;
  bool random_init = false;
  std::size_t mc_trials = 50;
  std::uint64_t seed = 0;
  VariantSelection variant = VariantSelection::Both;
  bool baseline = true;

  std::vector<double> t_values{100, 200, 300, 400, 500, 600, 700, 800, 900, 1000};
  std::vector<double> n_values{100, 200, 300, 400, 500};
  std::vector<double> mu_values{0.1, 1.0, 10.0};

  /// Throws ParameterError on the first violated invariant.
  void validate() const;

  std::size_t effective_sparsity() const;
};

/// Applies one `key=value` assignment. Unknown keys and malformed values
/// throw ParameterError.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Flat key=value text, `#` starts a comment, blank lines ignored.
void parse_config(std::istream& is, ExperimentConfig& cfg);
ExperimentConfig load_config(const std::filesystem::path& path);

enum class SweepParameter { T, n, mu };

struct SweepSpec {
  SweepParameter parameter;
  std::vector<double> values;

  void validate() const;
};

const char* to_string(SweepParameter p);
VariantSelection parse_variant(const std::string& s);

}  // namespace dlbiht
