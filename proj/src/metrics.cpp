#include "dlbiht/metrics.hpp"

#include <cmath>
#include <limits>

#include "dlbiht/kernels.hpp"

namespace dlbiht {

double nmse(const Matrix& X, const Matrix& X_hat) {
  if (X.rows() != X_hat.rows() || X.cols() != X_hat.cols()) {
    throw ParameterError("nmse: dimension mismatch");
  }
  const double ref = X.norm();
  if (!(ref > 0.0)) throw ParameterError("nmse: reference signal has zero norm");
  const double err = (X - X_hat).norm();
  if (err == 0.0) return -std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(err / ref);
}

double sign_consistency(const Matrix& Y, const Matrix& D, const Matrix& S_hat) {
  if (D.cols() != S_hat.rows() || D.rows() != Y.rows() || S_hat.cols() != Y.cols()) {
    throw ParameterError("sign_consistency: dimension mismatch");
  }
  if (Y.size() == 0) throw ParameterError("sign_consistency: empty measurements");
  const Matrix Z = D * S_hat;
  Eigen::Index agree = 0;
  for (Eigen::Index c = 0; c < Z.cols(); ++c) {
    for (Eigen::Index r = 0; r < Z.rows(); ++r) agree += sign_unchecked(Z(r, c)) == Y(r, c);
  }
  return static_cast<double>(agree) / static_cast<double>(Y.size());
}

NmseAverage average_nmse(std::span<const TrialResult> results) {
  if (results.empty()) throw ParameterError("average_nmse: no trial results");
  NmseAverage avg;
  double sum = 0.0;
  for (const auto& r : results) {
    if (std::isinf(r.nmse_db) && r.nmse_db < 0.0) {
      ++avg.excluded;
      continue;
    }
    sum += r.nmse_db;
    ++avg.used;
  }
  if (avg.used == 0) throw ParameterError("average_nmse: every trial is an exact-recovery sentinel");
  avg.mean_db = sum / static_cast<double>(avg.used);
  return avg;
}

}  // namespace dlbiht
