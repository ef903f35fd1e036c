#include "dlbiht/dictlearn.hpp"

#include <cmath>
#include <string>

#include "dlbiht/kernels.hpp"
#include "dlbiht/parallel.hpp"

namespace dlbiht {

namespace {

void check_cost_dims(const Matrix& D, const Matrix& S, const Matrix& Y, const char* who) {
  if (D.cols() != S.rows() || D.rows() != Y.rows() || S.cols() != Y.cols()) {
    throw ParameterError(std::string(who) + ": dimension mismatch (D " + std::to_string(D.rows()) +
                         "x" + std::to_string(D.cols()) + ", S " + std::to_string(S.rows()) + "x" +
                         std::to_string(S.cols()) + ", Y " + std::to_string(Y.rows()) + "x" +
                         std::to_string(Y.cols()) + ")");
  }
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace

DivergenceError::DivergenceError(std::size_t iteration, std::vector<double> partial_history)
    : std::runtime_error("numeric divergence at outer iteration " + std::to_string(iteration)),
      iteration_(iteration),
      partial_(std::move(partial_history)) {}

void LearnConfig::validate() const {
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw ParameterError("mu must be finite and >= 0");
  if (outer_iterations < 1) throw ParameterError("outer_iterations must be >= 1");
  if (inner_steps < 1) throw ParameterError("inner_steps must be >= 1");
}

double cost_l2(const Matrix& D, const Matrix& S, const Matrix& Y) {
  check_cost_dims(D, S, Y, "cost_l2");
  const Matrix Z = D * S;
  return (Y - Z.unaryExpr([](double x) { return s_shape(x); })).squaredNorm();
}

double cost_l1(const Matrix& D, const Matrix& S, const Matrix& Y) {
  check_cost_dims(D, S, Y, "cost_l1");
  const Matrix Z = D * S;
  return (Y - Z.unaryExpr([](double x) { return s_shape(x); })).cwiseAbs().sum();
}

RowVector update_row(const RowVector& d_k, Eigen::Index k, const Matrix& S, const Matrix& Y,
                     double mu, IndicatorVariant variant) {
  if (d_k.size() != S.rows() || S.cols() != Y.cols() || k < 0 || k >= Y.rows()) {
    throw ParameterError("update_row: dimension mismatch");
  }
  if (!(mu >= 0.0)) throw ParameterError("update_row: mu must be >= 0");

  const RowVector z = d_k * S;  // d_k . s_i for every i
  RowVector weight(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double e = Y(k, i) - s_shape(z(i));
    const double g = variant == IndicatorVariant::L2 ? e : sign_unchecked(e);
    weight(i) = s_shape_deriv(z(i)) * g;
  }
  return d_k + mu * (weight * S.transpose());
}

Dictionary dict_update(const Dictionary& D, const Matrix& S, const Matrix& Y, double mu,
                       IndicatorVariant variant, std::size_t threads) {
  check_cost_dims(D.data, S, Y, "dict_update");
  Dictionary out{Matrix(D.data.rows(), D.data.cols())};
  parallel_for(static_cast<std::size_t>(D.data.rows()), threads, [&](std::size_t r) {
    const auto k = static_cast<Eigen::Index>(r);
    out.data.row(k) = update_row(D.data.row(k), k, S, Y, mu, variant);
  });
  return out;
}

LearnState learn(const Matrix& Y, const Dictionary& D_init, const LearnConfig& cfg) {
  cfg.validate();
  cfg.biht.validate(D_init.data.cols());
  if (Y.rows() != D_init.data.rows()) {
    throw ParameterError("learn: Y has " + std::to_string(Y.rows()) + " rows but D has " +
                         std::to_string(D_init.data.rows()));
  }

  LearnState state;
  state.D = D_init;
  state.cost_history.reserve(cfg.outer_iterations);
  for (std::size_t it = 1; it <= cfg.outer_iterations; ++it) {
    state.S_hat = biht_recover_all(Y, state.D.data, cfg.biht, cfg.threads).codes;
    for (std::size_t step = 0; step < cfg.inner_steps; ++step) {
      state.D = dict_update(state.D, state.S_hat.data, Y, cfg.mu, cfg.variant, cfg.threads);
    }
    if (!all_finite(state.D.data)) throw DivergenceError(it, state.cost_history);
    const double cost = cost_l2(state.D.data, state.S_hat.data, Y);
    if (!std::isfinite(cost)) throw DivergenceError(it, state.cost_history);
    state.cost_history.push_back(cost);
    state.iteration = it;
  }
  return state;
}

Dictionary perturbed_dictionary(const Matrix& D, double perturbation, RngStream& rng) {
  if (!(perturbation >= 0.0)) throw ParameterError("perturbation must be >= 0");
  Dictionary out{D};
  if (perturbation > 0.0) {
    out.data += perturbation * gen_gaussian_matrix(static_cast<std::size_t>(D.rows()),
                                                   static_cast<std::size_t>(D.cols()), rng, false);
  }
  return out;
}

Dictionary random_dictionary(std::size_t n, std::size_t K, RngStream& rng) {
  return Dictionary{gen_gaussian_matrix(n, K, rng, true)};
}

Matrix recover_phi(const Matrix& A, const Matrix& D, double max_condition) {
  if (A.rows() != D.rows()) throw ParameterError("recover_phi: A and D row counts differ");
  if (A.rows() < A.cols()) {
    throw RankError("recover_phi: need n >= m for a left inverse (n=" + std::to_string(A.rows()) +
                    ", m=" + std::to_string(A.cols()) + ")");
  }
  const Vector sv = Eigen::JacobiSVD<Matrix>(A).singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0) || smax / smin > max_condition) {
    throw RankError("recover_phi: A^T A is singular or ill-conditioned (cond(A)=" +
                    std::to_string(smin > 0.0 ? smax / smin : INFINITY) + ")");
  }
  return A.colPivHouseholderQr().solve(D);
}

Matrix reconstruct_signals(const Matrix& Phi_hat, const Matrix& S_hat) {
  if (Phi_hat.cols() != S_hat.rows()) throw ParameterError("reconstruct_signals: dimension mismatch");
  return Phi_hat * S_hat;
}

}  // namespace dlbiht
