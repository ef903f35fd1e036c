#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace dlbiht {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

// Error taxonomy shared by every module. The CLI maps these onto exit codes.

/// Invalid argument, dimension mismatch, or out-of-range configuration value.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite input to a scalar kernel.
class NumericError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The sensing matrix has no usable left inverse.
class RankError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class IndicatorVariant { L1, L2 };

inline const char* to_string(IndicatorVariant v) {
  return v == IndicatorVariant::L1 ? "l1" : "l2";
}

}  // namespace dlbiht
