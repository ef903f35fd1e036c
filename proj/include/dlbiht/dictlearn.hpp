#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "dlbiht/biht.hpp"
#include "dlbiht/model.hpp"
#include "dlbiht/rng.hpp"
#include "dlbiht/types.hpp"

namespace dlbiht {

/// n x K dictionary D = A Phi. Row k holds the unknowns of the k-th
/// independent steepest-descent subproblem.
struct Dictionary {
  Matrix data;
};

struct LearnConfig {
  IndicatorVariant variant = IndicatorVariant::L2;
  double mu = 1.0;
  std::size_t outer_iterations = 40;
  std::size_t inner_steps = 1;
  BihtConfig biht;
  std::size_t threads = 1;

  void validate() const;
};

struct LearnState {
  Dictionary D;
  SparseCodes S_hat;
  std::vector<double> cost_history;  // J(D) after each round
  std::size_t iteration = 0;
};

/// Thrown when D or the cost turns non-finite. Carries the rounds that
/// completed so callers can keep the truncated trace.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::size_t iteration, std::vector<double> partial_history);

  std::size_t iteration() const { return iteration_; }
  const std::vector<double>& partial_history() const { return partial_; }

 private:
  std::size_t iteration_;
  std::vector<double> partial_;
};

/// J(D) = sum_i ||y_i - S(D s_i)||_2^2.
double cost_l2(const Matrix& D, const Matrix& S, const Matrix& Y);
/// Q(D) = sum_i ||y_i - S(D s_i)||_1.
double cost_l1(const Matrix& D, const Matrix& S, const Matrix& Y);

/// One steepest-descent step on row k:
///   d_k + mu * sum_i s_i S'(d_k . s_i) g(e_ik),  e_ik = y_ik - S(d_k . s_i)
/// with g(e) = e for L2 (the factor 2 of I' is folded into mu) and
/// g(e) = sign(e) for L1.
RowVector update_row(const RowVector& d_k, Eigen::Index k, const Matrix& S, const Matrix& Y,
                     double mu, IndicatorVariant variant);

/// Applies update_row to all n rows. Rows are independent.
Dictionary dict_update(const Dictionary& D, const Matrix& S, const Matrix& Y, double mu,
                       IndicatorVariant variant, std::size_t threads = 1);

/// Alternates BIHT recovery of every column of Y with dict_update, starting
/// from D_init, for cfg.outer_iterations rounds.
LearnState learn(const Matrix& Y, const Dictionary& D_init, const LearnConfig& cfg);

/// Oracle-perturbed start: D + perturbation * N(0, 1).
Dictionary perturbed_dictionary(const Matrix& D, double perturbation, RngStream& rng);
/// Blind start: i.i.d. Gaussian with unit-norm columns.
Dictionary random_dictionary(std::size_t n, std::size_t K, RngStream& rng);

/// Least-squares left inverse: argmin_Phi ||A Phi - D||_F. Throws RankError
/// when n < m or cond(A) exceeds max_condition.
Matrix recover_phi(const Matrix& A, const Matrix& D, double max_condition = 1e10);

Matrix reconstruct_signals(const Matrix& Phi_hat, const Matrix& S_hat);

}  // namespace dlbiht
