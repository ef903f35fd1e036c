#pragma once

#include <cstddef>

#include "dlbiht/rng.hpp"
#include "dlbiht/types.hpp"

namespace dlbiht {

struct ExperimentConfig;

/// K x T matrix whose columns are unit-norm Bernoulli-Gaussian sparse codes.
struct SparseCodes {
  Matrix data;

  Eigen::Index atoms() const { return data.rows(); }
  Eigen::Index signals() const { return data.cols(); }
};

/// One synthetic blind one-bit CS problem: Y = sign(A Phi S + V).
struct ModelInstance {
  Matrix A;    // n x m sensing matrix
  Matrix Phi;  // m x K sparse domain, unit-norm columns
  Matrix D;    // n x K, A * Phi
  SparseCodes S;
  Matrix X;  // m x T, Phi * S
  Matrix V;  // n x T noise
  Matrix Y;  // n x T, entries in {-1, +1}
};

SparseCodes gen_sparse_codes(std::size_t K, std::size_t T, double p, double sigma_r,
                             RngStream& rng);

Matrix gen_gaussian_matrix(std::size_t rows, std::size_t cols, RngStream& rng,
                           bool normalize_columns);

/// Draws S, A, Phi and V from rng in that order, then forms D, X and Y.
ModelInstance synthesize(const ExperimentConfig& cfg, RngStream& rng);

/// Entrywise sign with sign(0) = +1.
Matrix sign_matrix(const Matrix& m);

}  // namespace dlbiht
