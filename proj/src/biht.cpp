#include "dlbiht/biht.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "dlbiht/kernels.hpp"
#include "dlbiht/parallel.hpp"

namespace dlbiht {

void BihtConfig::validate(Eigen::Index atoms) const {
  if (iterations < 1) throw ParameterError("BIHT needs at least one iteration");
  if (!(tau > 0.0)) throw ParameterError("BIHT tau must be positive");
  if (sparsity < 1 || static_cast<Eigen::Index>(sparsity) > atoms) {
    throw ParameterError("BIHT sparsity must lie in [1, K], got " + std::to_string(sparsity));
  }
}

namespace {

// Indices of the k largest |v|, ties to the lower index, in ascending order.
std::vector<Eigen::Index> top_k_support(const Vector& v, std::size_t k) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(v.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  auto larger = [&v](Eigen::Index a, Eigen::Index b) {
    const double fa = std::abs(v(a));
    const double fb = std::abs(v(b));
    return fa != fb ? fa > fb : a < b;
  };
  std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k) - 1, idx.end(), larger);
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

Vector hard_threshold(const Vector& v, std::size_t k) {
  if (k < 1 || static_cast<Eigen::Index>(k) > v.size()) {
    throw ParameterError("hard_threshold: k must lie in [1, len(v)]");
  }
  Vector out = Vector::Zero(v.size());
  for (const auto i : top_k_support(v, k)) out(i) = v(i);
  return out;
}

BihtResult biht_recover(const Vector& y, const Matrix& D, const BihtConfig& cfg) {
  cfg.validate(D.cols());
  if (y.size() != D.rows()) throw ParameterError("biht_recover: y length must equal rows of D");
  if (!D.allFinite()) throw ParameterError("biht_recover: dictionary has non-finite entries");

  const double half_tau = 0.5 * cfg.tau;
  Vector s = Vector::Zero(D.cols());
  std::vector<Eigen::Index> support;  // nonzeros of s
  Vector Ds(D.rows());
  Vector residual(D.rows());
  Vector a(D.cols());

  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    // s has at most K_s nonzeros, so D s only touches those columns.
    Ds.setZero();
    for (const auto j : support) Ds.noalias() += s(j) * D.col(j);
    for (Eigen::Index r = 0; r < Ds.size(); ++r) residual(r) = y(r) - sign_unchecked(Ds(r));
    a.noalias() = D.transpose() * residual;
    a = s + half_tau * a;

    support = top_k_support(a, cfg.sparsity);
    s.setZero();
    for (const auto j : support) s(j) = a(j);
  }

  BihtResult result;
  const double norm = s.norm();
  result.degenerate = norm == 0.0;
  if (cfg.normalize_output && !result.degenerate) s /= norm;
  result.s = std::move(s);
  return result;
}

BatchRecovery biht_recover_all(const Matrix& Y, const Matrix& D, const BihtConfig& cfg,
                               std::size_t threads) {
  cfg.validate(D.cols());
  if (Y.rows() != D.rows()) throw ParameterError("biht_recover_all: Y rows must equal D rows");

  BatchRecovery out;
  out.codes.data.resize(D.cols(), Y.cols());
  std::vector<char> degenerate(static_cast<std::size_t>(Y.cols()), 0);
  parallel_for(static_cast<std::size_t>(Y.cols()), threads, [&](std::size_t i) {
    const auto col = static_cast<Eigen::Index>(i);
    auto r = biht_recover(Y.col(col), D, cfg);
    out.codes.data.col(col) = r.s;
    degenerate[i] = r.degenerate;
  });
  out.degenerate = static_cast<std::size_t>(std::count(degenerate.begin(), degenerate.end(), 1));
  return out;
}

}  // namespace dlbiht
