#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "dlbiht/biht.hpp"
#include "dlbiht/config.hpp"
#include "dlbiht/kernels.hpp"
#include "dlbiht/metrics.hpp"

using namespace dlbiht;

namespace {

std::vector<Eigen::Index> support_of(const Vector& v) {
  std::vector<Eigen::Index> s;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) != 0.0) s.push_back(i);
  }
  return s;
}

std::size_t hamming(const Vector& y, const Matrix& D, const Vector& s) {
  const Vector z = D * s;
  std::size_t h = 0;
  for (Eigen::Index i = 0; i < y.size(); ++i) h += sign_unchecked(z(i)) != y(i);
  return h;
}

}  // namespace

TEST_CASE("hard_threshold") {
  Vector v(3);
  v << 3, -5, 1;
  Vector want(3);
  want << 0, -5, 0;
  CHECK(hard_threshold(v, 1) == want);

  Vector tie(2);
  tie << 2, 2;
  Vector tie_want(2);
  tie_want << 2, 0;
  CHECK(hard_threshold(tie, 1) == tie_want);

  CHECK(hard_threshold(v, 3) == v);
  CHECK_THROWS_AS(hard_threshold(v, 0), ParameterError);
  CHECK_THROWS_AS(hard_threshold(v, 4), ParameterError);
}

TEST_CASE("hard_threshold keeps at most k entries and the k largest") {
  RngStream rng(3, 0);
  for (int trial = 0; trial < 200; ++trial) {
    Vector v(12);
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.normal();
    const std::size_t k = 1 + static_cast<std::size_t>(trial % 12);
    const Vector h = hard_threshold(v, k);
    CHECK(support_of(h).size() == k);
    double kept_min = INFINITY, dropped_max = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (h(i) != 0.0) {
        CHECK(h(i) == v(i));
        kept_min = std::min(kept_min, std::fabs(v(i)));
      } else {
        dropped_max = std::max(dropped_max, std::fabs(v(i)));
      }
    }
    CHECK(kept_min >= dropped_max);
  }
}

TEST_CASE("identity dictionary: recovered support is sign-consistent (brute force)") {
  // With D = I and sign(0) = +1, y = sign(s_true) only pins down the negative
  // entries: a zero coefficient is indistinguishable from a positive one. The
  // oracle enumerates every support of size <= k and keeps those that admit a
  // sign-consistent vector (all y = -1 positions inside the support).
  RngStream rng(8, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index K = 3 + trial % 6;  // 3..8
    const std::size_t k = 1 + static_cast<std::size_t>(trial % 3);
    Vector s_true = Vector::Zero(K);
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(K));
    for (Eigen::Index i = 0; i < K; ++i) idx[static_cast<std::size_t>(i)] = i;
    std::shuffle(idx.begin(), idx.end(), rng.engine());
    const bool all_negative = trial % 2 == 0;
    for (std::size_t j = 0; j < k; ++j) {
      const double mag = 0.5 + std::fabs(rng.normal());
      s_true(idx[j]) = all_negative ? -mag : (rng.uniform() < 0.5 ? -mag : mag);
    }
    const Vector y = s_true.unaryExpr([](double x) { return sign_unchecked(x); });
    const Matrix D = Matrix::Identity(K, K);

    BihtConfig cfg;
    cfg.sparsity = k;
    const auto r = biht_recover(y, D, cfg);
    const auto got = support_of(r.s);

    std::set<std::vector<Eigen::Index>> consistent;
    for (unsigned mask = 0; mask < (1u << K); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcount(mask)) > k) continue;
      std::vector<Eigen::Index> sup;
      bool ok = true;
      for (Eigen::Index i = 0; i < K; ++i) {
        const bool in = mask & (1u << i);
        if (in) sup.push_back(i);
        if (!in && y(i) < 0) ok = false;
      }
      if (ok) consistent.insert(sup);
    }
    CHECK(consistent.count(got) == 1);
    CHECK(hamming(y, D, r.s) == 0);
    if (all_negative) CHECK(got == support_of(s_true));
  }
}

TEST_CASE("Gaussian dictionary, 1-sparse signal: consistency never worse than the start") {
  RngStream rng(21, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix D = gen_gaussian_matrix(200, 8, rng, false);
    Vector s_true = Vector::Zero(8);
    s_true(trial % 8) = rng.uniform() < 0.5 ? -1.0 : 1.0;
    const Vector y = (D * s_true).unaryExpr([](double x) { return sign_unchecked(x); });
    BihtConfig cfg;
    cfg.sparsity = 1;
    const auto r = biht_recover(y, D, cfg);
    CHECK(hamming(y, D, r.s) <= hamming(y, D, Vector::Zero(8)));
    CHECK(support_of(r.s) == support_of(s_true));
    CHECK(r.s(trial % 8) * s_true(trial % 8) > 0.0);
  }
}

TEST_CASE("normalized output lies on the unit sphere; degenerate result is flagged") {
  RngStream rng(4, 0);
  const Matrix D = gen_gaussian_matrix(100, 100, rng, false);
  Vector s = Vector::Zero(100);
  s(3) = 0.6;
  s(40) = -0.8;
  const Vector y = (D * s).unaryExpr([](double x) { return sign_unchecked(x); });
  BihtConfig cfg;
  const auto r = biht_recover(y, D, cfg);
  CHECK_FALSE(r.degenerate);
  CHECK(std::fabs(r.s.norm() - 1.0) < 1e-12);
  CHECK(support_of(r.s).size() <= 3);

  // y == sign(D 0) everywhere: the residual is zero from the start.
  const Vector ones = Vector::Ones(100);
  const auto d = biht_recover(ones, D, cfg);
  CHECK(d.degenerate);
  CHECK(d.s.isZero(0.0));
}

TEST_CASE("config and input validation") {
  const Matrix D = Matrix::Identity(4, 4);
  const Vector y = Vector::Ones(4);
  BihtConfig cfg;
  cfg.sparsity = 5;
  CHECK_THROWS_AS(biht_recover(y, D, cfg), ParameterError);
  cfg.sparsity = 2;
  cfg.tau = 0.0;
  CHECK_THROWS_AS(biht_recover(y, D, cfg), ParameterError);
  cfg.tau = 1.0;
  cfg.iterations = 0;
  CHECK_THROWS_AS(biht_recover(y, D, cfg), ParameterError);
  cfg.iterations = 20;
  CHECK_THROWS_AS(biht_recover(Vector::Ones(3), D, cfg), ParameterError);
  Matrix bad = D;
  bad(1, 1) = NAN;
  CHECK_THROWS_AS(biht_recover(y, bad, cfg), ParameterError);
}

TEST_CASE("batch recovery matches per-column calls for any thread count") {
  ExperimentConfig ecfg;
  ecfg.T = 40;
  RngStream rng(6, 0);
  const auto inst = synthesize(ecfg, rng);
  BihtConfig cfg;
  cfg.sparsity = ecfg.effective_sparsity();
  const auto one = biht_recover_all(inst.Y, inst.D, cfg, 1);
  const auto four = biht_recover_all(inst.Y, inst.D, cfg, 4);
  CHECK(one.codes.data == four.codes.data);
  for (Eigen::Index c = 0; c < inst.Y.cols(); ++c) {
    CHECK(one.codes.data.col(c) == biht_recover(inst.Y.col(c), inst.D, cfg).s);
  }
}

TEST_CASE("median sign error drops from the zero start at desk-scale sizes") {
  ExperimentConfig ecfg;
  ecfg.T = 1;
  ecfg.sigma_n = 0.0;
  BihtConfig cfg;
  cfg.sparsity = ecfg.effective_sparsity();
  std::vector<double> before, after;
  for (std::uint64_t t = 0; t < 50; ++t) {
    RngStream rng(31, t);
    const auto inst = synthesize(ecfg, rng);
    const Vector y = inst.Y.col(0);
    before.push_back(static_cast<double>(hamming(y, inst.D, Vector::Zero(inst.D.cols()))));
    after.push_back(static_cast<double>(hamming(y, inst.D, biht_recover(y, inst.D, cfg).s)));
  }
  std::nth_element(before.begin(), before.begin() + 25, before.end());
  std::nth_element(after.begin(), after.begin() + 25, after.end());
  CHECK(after[25] < before[25]);
}
