#include "doctest.h"

#include "support.hpp"

#include "wgfd/models.hpp"

#include <cmath>

using namespace wgfd;
using wgfd::testing::fd_jacobian;

namespace {

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

Vector bench_theta() {
  Vector t(8);
  t << -0.4926, -0.6280, -0.3283, 0.4378, 0.5283, -0.6120, -0.6837, -0.2061;
  return t;
}

}  // namespace

TEST_CASE("second-order feature count") {
  CHECK(second_order_feature_count(1) == 3);
  CHECK(second_order_feature_count(2) == 6);
  CHECK(second_order_feature_count(5) == 21);
  CHECK(RegressionModel::second_order(5).feature_dim() == 21);
  CHECK(RegressionModel::second_order(5).input_dim() == 5);
}

TEST_CASE("second-order feature ordering") {
  const auto model = RegressionModel::second_order(3);
  Vector x(3);
  x << 2.0, 3.0, 5.0;
  Vector expect(10);
  expect << 1, 2, 3, 5, 4, 9, 25, 6, 10, 15;
  CHECK((model.features(x) - expect).norm() == doctest::Approx(0.0));

  const auto k1 = RegressionModel::second_order(1);
  const Vector f = k1.features(Vector::Constant(1, -0.5));
  CHECK(f[0] == 1.0);
  CHECK(f[1] == -0.5);
  CHECK(f[2] == 0.25);
}

TEST_CASE("logistic features at the origin") {
  const Vector theta = bench_theta();
  const double mu = sigmoid(theta[0]);
  const auto paper = RegressionModel::logistic(theta, GlmWeight::paper);
  const Vector f = paper.features(Vector::Zero(7));
  CHECK(paper.feature_dim() == 8);
  CHECK(f[0] == doctest::Approx(mu * (1 - mu)).epsilon(1e-14));
  CHECK(f.tail(7).norm() == 0.0);

  const auto fisher = RegressionModel::logistic(theta, GlmWeight::fisher);
  CHECK(fisher.features(Vector::Zero(7))[0] == doctest::Approx(std::sqrt(mu * (1 - mu))));
}

TEST_CASE("Jacobian matches central differences") {
  std::mt19937_64 rng(7);
  for (int k : {1, 2, 5}) {
    const auto model = RegressionModel::second_order(k);
    for (int rep = 0; rep < 10; ++rep) {
      const Vector x = wgfd::testing::random_points(rng, k, 1).col(0);
      CHECK(wgfd::testing::rel_error(model.jacobian(x), fd_jacobian(model, x)) < 1e-8);
    }
  }
  for (GlmWeight w : {GlmWeight::paper, GlmWeight::fisher}) {
    const auto model = RegressionModel::logistic(bench_theta(), w);
    for (int rep = 0; rep < 10; ++rep) {
      const Vector x = wgfd::testing::random_points(rng, 7, 1, -3, 3).col(0);
      CHECK(wgfd::testing::rel_error(model.jacobian(x), fd_jacobian(model, x)) < 1e-7);
    }
  }
}

TEST_CASE("feature_matrix agrees with per-point features") {
  std::mt19937_64 rng(3);
  const auto model = RegressionModel::second_order(4);
  const Matrix pts = wgfd::testing::random_points(rng, 4, 9);
  const Matrix fm = model.feature_matrix(pts);
  for (int i = 0; i < 9; ++i) CHECK((fm.col(i) - model.features(pts.col(i))).norm() == 0.0);
}

TEST_CASE("model argument checks") {
  CHECK_THROWS_AS(RegressionModel::second_order(0), std::invalid_argument);
  CHECK_THROWS_AS(RegressionModel::logistic(Vector::Ones(1)), std::invalid_argument);
  const auto model = RegressionModel::second_order(2);
  CHECK_THROWS_AS(model.features(Vector::Zero(3)), std::invalid_argument);
  CHECK_THROWS_AS(model.feature_matrix(Matrix::Zero(3, 4)), std::invalid_argument);
  CHECK(glm_weight_from_string("fisher") == GlmWeight::fisher);
  CHECK_THROWS_AS(glm_weight_from_string("other"), std::invalid_argument);
}

TEST_CASE("projection onto a box") {
  const auto box = DesignSpace::cube(3, -1, 1);
  Vector x(3);
  x << 2.0, -0.5, -7.0;
  const Vector p = box.project(x);
  CHECK(p[0] == 1.0);
  CHECK(p[1] == -0.5);
  CHECK(p[2] == -1.0);
  CHECK(box.contains(p));
  CHECK_FALSE(box.contains(x));
  CHECK(box.diameter() == doctest::Approx(2.0 * std::sqrt(3.0)));
}

TEST_CASE("projection onto a ball") {
  const auto ball = DesignSpace::ball(2, 2.0);
  Vector x(2);
  x << 3.0, 4.0;
  const Vector p = ball.project(x);
  CHECK(p.norm() == doctest::Approx(2.0));
  CHECK(p[0] / p[1] == doctest::Approx(0.75));
  Vector inside(2);
  inside << 0.1, -0.3;
  CHECK(ball.project(inside) == inside);
  CHECK(ball.diameter() == 4.0);
}

TEST_CASE("projection is idempotent and non-expansive") {
  std::mt19937_64 rng(11);
  for (const DesignSpace& space :
       {DesignSpace::cube(4, -1, 1), DesignSpace::ball(4, 1.0),
        DesignSpace::box(Vector::LinSpaced(4, -2, 1), Vector::LinSpaced(4, 0, 3))}) {
    for (int rep = 0; rep < 200; ++rep) {
      const Vector x = wgfd::testing::random_points(rng, 4, 1, -4, 4).col(0);
      const Vector y = wgfd::testing::random_points(rng, 4, 1, -4, 4).col(0);
      const Vector px = space.project(x);
      CHECK(space.contains(px));
      CHECK((space.project(px) - px).norm() <= 1e-15);
      CHECK((px - space.project(y)).norm() <= (x - y).norm() + 1e-12);
    }
  }
}

TEST_CASE("design space argument checks") {
  CHECK_THROWS_AS(DesignSpace::cube(2, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(DesignSpace::ball(2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(DesignSpace::ball(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(DesignSpace::box(Vector::Zero(2), Vector::Ones(3)), std::invalid_argument);
}
