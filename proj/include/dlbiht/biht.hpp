#pragma once

#include <cstddef>

#include "dlbiht/model.hpp"
#include "dlbiht/types.hpp"

namespace dlbiht {

struct BihtConfig {
  std::size_t iterations = 20;
  double tau = 1.0;
  std::size_t sparsity = 3;  // hard-threshold level K_s
  bool normalize_output = true;

  void validate(Eigen::Index atoms) const;
};

struct BihtResult {
  Vector s;
  // All-zero estimate after the last iteration; returned unnormalized.
  bool degenerate = false;
};

/// Keeps the k largest-magnitude entries of v. Among equal magnitudes the
/// lower index wins.
Vector hard_threshold(const Vector& v, std::size_t k);

/// Binary iterative hard thresholding from s = 0:
///   s <- H_k( s + tau/2 * D^T (y - sign(D s)) )
/// repeated cfg.iterations times, then scaled to unit norm if requested.
BihtResult biht_recover(const Vector& y, const Matrix& D, const BihtConfig& cfg);

struct BatchRecovery {
  SparseCodes codes;
  std::size_t degenerate = 0;
};

/// Column-wise biht_recover over Y, split across `threads` workers.
BatchRecovery biht_recover_all(const Matrix& Y, const Matrix& D, const BihtConfig& cfg,
                               std::size_t threads = 1);

}  // namespace dlbiht
