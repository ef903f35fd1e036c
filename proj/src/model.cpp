#include "dlbiht/model.hpp"

#include <cmath>
#include <string>

#include "dlbiht/config.hpp"
#include "dlbiht/kernels.hpp"

namespace dlbiht {

SparseCodes gen_sparse_codes(std::size_t K, std::size_t T, double p, double sigma_r,
                             RngStream& rng) {
  if (K == 0 || T == 0) throw ParameterError("sparse codes need K >= 1 and T >= 1");
  if (!(p > 0.0 && p < 1.0)) {
    throw ParameterError("activity probability must lie in (0, 1), got " + std::to_string(p));
  }
  if (!(sigma_r > 0.0)) throw ParameterError("sigma_r must be positive");

  SparseCodes codes{Matrix::Zero(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(T))};
  Vector col(static_cast<Eigen::Index>(K));
  for (Eigen::Index t = 0; t < codes.data.cols(); ++t) {
    // Resample the whole column until at least one entry is active.
    bool any = false;
    while (!any) {
      for (Eigen::Index k = 0; k < col.size(); ++k) {
        const bool active = rng.uniform() < p;
        const double value = sigma_r * rng.normal();
        col(k) = active ? value : 0.0;
        any = any || (active && value != 0.0);
      }
    }
    codes.data.col(t) = col / col.norm();
  }
  return codes;
}

Matrix gen_gaussian_matrix(std::size_t rows, std::size_t cols, RngStream& rng,
                           bool normalize_columns) {
  if (rows == 0 || cols == 0) throw ParameterError("gaussian matrix needs rows, cols >= 1");
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  // Column-major fill so each column is a contiguous slice of the stream.
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = rng.normal();
  }
  if (normalize_columns) m.colwise().normalize();
  return m;
}

Matrix sign_matrix(const Matrix& m) {
  return m.unaryExpr([](double x) { return sign_scalar(x); });
}

ModelInstance synthesize(const ExperimentConfig& cfg, RngStream& rng) {
  cfg.validate();
  ModelInstance inst;
  inst.S = gen_sparse_codes(cfg.K, cfg.T, cfg.p, cfg.sigma_r, rng);
  inst.A = gen_gaussian_matrix(cfg.n, cfg.m, rng, false);
  inst.Phi = gen_gaussian_matrix(cfg.m, cfg.K, rng, true);
  inst.D = inst.A * inst.Phi;
  inst.X = inst.Phi * inst.S.data;
  if (cfg.sigma_n > 0.0) {
    inst.V = cfg.sigma_n * gen_gaussian_matrix(cfg.n, cfg.T, rng, false);
  } else {
    inst.V = Matrix::Zero(static_cast<Eigen::Index>(cfg.n), static_cast<Eigen::Index>(cfg.T));
  }
  inst.Y = sign_matrix(inst.D * inst.S.data + inst.V);
  return inst;
}

}  // namespace dlbiht
