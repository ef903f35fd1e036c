#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "dlbiht/kernels.hpp"

using namespace dlbiht;

namespace {

double rel_err(double got, double want) {
  return std::fabs(got - want) / std::max(std::fabs(want), 1e-300);
}

}  // namespace

TEST_CASE("sign_scalar uses +1 at zero") {
  CHECK(sign_scalar(3.7) == 1.0);
  CHECK(sign_scalar(-0.001) == -1.0);
  CHECK(sign_scalar(0.0) == 1.0);
  CHECK(sign_scalar(-0.0) == 1.0);
  CHECK_THROWS_AS(sign_scalar(std::numeric_limits<double>::quiet_NaN()), NumericError);
  CHECK_THROWS_AS(sign_scalar(std::numeric_limits<double>::infinity()), NumericError);
}

TEST_CASE("s_shape values and symmetry") {
  CHECK(s_shape(0.0) == 0.0);
  CHECK(s_shape(std::log(3.0)) == doctest::Approx(0.5).epsilon(1e-15));

  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> dist(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = dist(gen);
    CHECK(s_shape(-x) == -s_shape(x));
    CHECK(std::fabs(s_shape(x)) <= 1.0);
    // Same function as tanh(x/2).
    CHECK(std::fabs(s_shape(x) - std::tanh(0.5 * x)) < 1e-15);
  }
}

TEST_CASE("s_shape is monotone and saturates without NaN") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> dist(-30.0, 30.0);
  std::vector<double> xs(2000);
  for (auto& x : xs) x = dist(gen);
  std::sort(xs.begin(), xs.end());
  for (std::size_t i = 1; i < xs.size(); ++i) CHECK(s_shape(xs[i]) >= s_shape(xs[i - 1]));
  for (double x : {-30.0, -1.0, 0.5, 30.0}) CHECK(std::fabs(s_shape(x)) < 1.0);

  for (double x : {-1e308, -750.0, -700.0, 700.0, 750.0, 1e308}) {
    CHECK(std::isfinite(s_shape(x)));
    CHECK(std::isfinite(s_shape_deriv(x)));
    CHECK(std::isfinite(s_shape_second(x)));
    CHECK(std::isfinite(curvature_term(x, 1.0)));
    CHECK(std::isfinite(curvature_closed_form(x, -1.0)));
  }
  CHECK(s_shape(1e308) == 1.0);
  CHECK(s_shape(-1e308) == -1.0);
}

TEST_CASE("s_shape_deriv against central differences") {
  CHECK(s_shape_deriv(0.0) == 0.5);
  CHECK(s_shape_deriv(20.0) < 1e-7);
  CHECK(s_shape_deriv(20.0) > 0.0);

  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> dist(-8.0, 8.0);
  const double h = 1e-6;
  for (int i = 0; i < 500; ++i) {
    const double x = dist(gen);
    const double fd = (s_shape(x + h) - s_shape(x - h)) / (2 * h);
    CHECK(s_shape_deriv(x) > 0.0);
    CHECK(rel_err(s_shape_deriv(x), fd) < 1e-6);
  }
}

TEST_CASE("s_shape_second against central differences of the derivative") {
  CHECK(s_shape_second(0.0) == 0.0);
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> dist(-8.0, 8.0);
  const double h = 1e-6;
  for (int i = 0; i < 500; ++i) {
    const double x = dist(gen);
    if (std::fabs(x) < 0.05) continue;  // near the root the relative error is meaningless
    const double fd = (s_shape_deriv(x + h) - s_shape_deriv(x - h)) / (2 * h);
    CHECK(rel_err(s_shape_second(x), fd) < 1e-5);
    if (x > 0) CHECK(s_shape_second(x) < 0.0);
    if (x < 0) CHECK(s_shape_second(x) > 0.0);
  }
}

TEST_CASE("indicator functions") {
  CHECK(indicator(IndicatorVariant::L1, -2.0) == 2.0);
  CHECK(indicator(IndicatorVariant::L2, -2.0) == 4.0);
  CHECK(indicator(IndicatorVariant::L1, 0.0) == 0.0);
  CHECK(indicator(IndicatorVariant::L2, 0.0) == 0.0);

  CHECK(indicator_deriv(IndicatorVariant::L2, 0.3) == doctest::Approx(0.6));
  CHECK(indicator_deriv(IndicatorVariant::L1, -5.0) == -1.0);
  CHECK(indicator_deriv(IndicatorVariant::L1, 0.0) == 1.0);
}

TEST_CASE("curvature_term is the second derivative of the per-sample L2 loss") {
  CHECK(curvature_term(0.0, 1.0) == doctest::Approx(0.25));
  CHECK(curvature_term(0.0, -1.0) == doctest::Approx(0.25));
  CHECK(curvature_closed_form(0.0, 1.0) == doctest::Approx(0.25));
  CHECK(curvature_closed_form(0.0, -1.0) == doctest::Approx(0.25));

  // Oracle: second central difference of (y - S(x))^2 / 2, built from s_shape only.
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  const double h = 1e-3;
  for (int i = 0; i < 1000; ++i) {
    const double x = dist(gen);
    const double y = (i % 2) ? 1.0 : -1.0;
    auto loss = [y](double t) { return 0.5 * (y - s_shape(t)) * (y - s_shape(t)); };
    const double fd = (loss(x + h) - 2 * loss(x) + loss(x - h)) / (h * h);
    CHECK(std::fabs(curvature_term(x, y) - fd) < 1e-7);
  }
}

TEST_CASE("curvature_term is symmetric under (x, y) -> (-x, -y)") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> dist(-30.0, 30.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = dist(gen);
    CHECK(curvature_term(x, 1.0) == doctest::Approx(curvature_term(-x, -1.0)).epsilon(1e-12));
  }
}

TEST_CASE("composition-rule branch signs for matched labels") {
  std::mt19937_64 gen(19);
  std::uniform_real_distribution<double> dist(-30.0, 30.0);
  for (int i = 0; i < 10000; ++i) {
    const double z = dist(gen);
    if (z == 0.0) continue;
    if (z > 0) {
      CHECK(s_shape_second(z) < 0.0);
      CHECK(1.0 - s_shape(z) > 0.0);
    } else {
      CHECK(s_shape_second(z) > 0.0);
      CHECK(-1.0 - s_shape(z) < 0.0);
    }
  }
}
