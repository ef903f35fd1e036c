#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dlbiht/types.hpp"

namespace dlbiht {

struct TrialResult {
  double nmse_db = 0.0;
  std::vector<double> cost_trace;
  double sign_consistency = 0.0;  // in [0, 1]
  double wall_time = 0.0;         // seconds
};

/// 20 log10(||X - X_hat||_F / ||X||_F). Returns -infinity when X_hat == X.
double nmse(const Matrix& X, const Matrix& X_hat);

/// Fraction of entries with sign(D S_hat) == Y.
double sign_consistency(const Matrix& Y, const Matrix& D, const Matrix& S_hat);

struct NmseAverage {
  double mean_db = 0.0;
  std::size_t used = 0;
  std::size_t excluded = 0;  // -infinity sentinels dropped from the mean
};

/// Mean of per-trial dB values. Sentinels are excluded and counted; an empty
/// input or one made only of sentinels is a ParameterError.
NmseAverage average_nmse(std::span<const TrialResult> results);

}  // namespace dlbiht
