#include "doctest.h"

#include "support.hpp"

#include "wgfd/design.hpp"
#include "wgfd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

using namespace wgfd;

TEST_CASE("information matrix of three points on a line") {
  Matrix pts(1, 3);
  pts << -1, 0, 1;
  const InfoMatrix info = info_matrix(DesignMeasure(pts), RegressionModel::second_order(1));
  Matrix expect(3, 3);
  expect << 1, 0, 2.0 / 3, 0, 2.0 / 3, 0, 2.0 / 3, 0, 2.0 / 3;
  CHECK((info.matrix() - expect).norm() < 1e-15);
}

TEST_CASE("criteria against direct formulas") {
  std::mt19937_64 rng(5);
  const auto model = RegressionModel::second_order(2);
  const DesignMeasure mu(wgfd::testing::random_points(rng, 2, 30));
  const Matrix m = wgfd::testing::direct_moment(mu.points(), model);
  const Matrix minv = m.inverse();
  const InfoMatrix info = info_matrix(mu, model);
  const Matrix lw = wgfd::testing::random_psd(rng, 6);
  const Vector c = wgfd::testing::random_vector(rng, 6);

  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  CHECK(criterion_value(info, Criterion::E()) == doctest::Approx(es.eigenvalues()[0]));
  CHECK(criterion_value(info, Criterion::D()) == doctest::Approx(std::log(m.determinant())));
  CHECK(criterion_value(info, Criterion::A()) == doctest::Approx(-minv.trace()));
  CHECK(criterion_value(info, Criterion::L(lw)) == doctest::Approx(-(lw * minv).trace()));
  CHECK(criterion_value(info, Criterion::c(c)) == doctest::Approx(-c.dot(minv * c)));

  for (const Criterion& crit : {Criterion::E(), Criterion::D(), Criterion::A()})
    CHECK(criterion_value_fast(m, crit) == doctest::Approx(criterion_value(info, crit)));
}

TEST_CASE("A and c are special cases of L") {
  std::mt19937_64 rng(8);
  const auto model = RegressionModel::second_order(2);
  const DesignMeasure mu(wgfd::testing::random_points(rng, 2, 15));
  const Vector c = wgfd::testing::random_vector(rng, 6);
  CHECK(criterion_value(mu, model, Criterion::A()) ==
        doctest::Approx(criterion_value(mu, model, Criterion::L(Matrix::Identity(6, 6)))));
  CHECK(criterion_value(mu, model, Criterion::c(c)) ==
        doctest::Approx(criterion_value(mu, model, Criterion::L(c * c.transpose()))));
}

TEST_CASE("singular designs") {
  // Five points for six parameters: rank-deficient.
  std::mt19937_64 rng(2);
  const auto model = RegressionModel::second_order(2);
  const DesignMeasure mu(wgfd::testing::random_points(rng, 2, 5));
  const InfoMatrix info = info_matrix(mu, model);
  CHECK(info.is_singular());
  const double ninf = -std::numeric_limits<double>::infinity();
  CHECK(criterion_value(info, Criterion::D()) == ninf);
  CHECK(criterion_value(info, Criterion::A()) == ninf);
  CHECK(criterion_value(info, Criterion::c(Vector::Ones(6))) == ninf);
  CHECK(criterion_value_fast(info.matrix(), Criterion::D()) == ninf);
  CHECK(std::isfinite(criterion_value(info, Criterion::E())));
  CHECK(std::abs(criterion_value(info, Criterion::E())) < 1e-12);
  CHECK_THROWS_AS(info.inverse(), InfeasibleError);
}

TEST_CASE("permutation and duplication invariance") {
  std::mt19937_64 rng(13);
  const auto model = RegressionModel::second_order(3);
  const Matrix pts = wgfd::testing::random_points(rng, 3, 25);

  std::vector<int> perm(25);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Matrix shuffled(3, 25);
  for (int i = 0; i < 25; ++i) shuffled.col(i) = pts.col(perm[i]);
  Matrix doubled(3, 50);
  doubled << pts, pts;

  const InfoMatrix base = info_matrix(DesignMeasure(pts), model);
  for (const Matrix& other : {shuffled, doubled}) {
    const InfoMatrix info = info_matrix(DesignMeasure(other), model);
    CHECK((info.matrix() - base.matrix()).norm() < 1e-12);
    for (const Criterion& crit : {Criterion::E(), Criterion::D(), Criterion::A()})
      CHECK(std::abs(criterion_value(info, crit) - criterion_value(base, crit)) < 1e-12);
  }
}

TEST_CASE("lambda_min obeys the Weyl bound") {
  std::mt19937_64 rng(17);
  const auto model = RegressionModel::second_order(2);
  for (int rep = 0; rep < 50; ++rep) {
    const InfoMatrix a = info_matrix(DesignMeasure(wgfd::testing::random_points(rng, 2, 12)), model);
    const InfoMatrix b = info_matrix(DesignMeasure(wgfd::testing::random_points(rng, 2, 12)), model);
    Eigen::SelfAdjointEigenSolver<Matrix> diff(a.matrix() - b.matrix(), Eigen::EigenvaluesOnly);
    const double spec = diff.eigenvalues().cwiseAbs().maxCoeff();
    CHECK(std::abs(a.lambda_min() - b.lambda_min()) <= spec + 1e-12);
  }
}

TEST_CASE("solve and log_det through the eigenbasis") {
  std::mt19937_64 rng(19);
  const Matrix m = wgfd::testing::random_psd(rng, 5) + 0.1 * Matrix::Identity(5, 5);
  const InfoMatrix info(m);
  const Vector b = wgfd::testing::random_vector(rng, 5);
  CHECK(wgfd::testing::rel_error(info.solve(b), m.ldlt().solve(b)) < 1e-10);
  CHECK(info.log_det() == doctest::Approx(std::log(m.determinant())));
  CHECK(info.singular_tol() == doctest::Approx(1e-10 * std::max(1.0, info.lambda_max())));
}

TEST_CASE("reported orientation") {
  CHECK(reported_value(Criterion::A(), -3.0) == 3.0);
  CHECK(reported_value(Criterion::c(Vector::Ones(2)), -2.0) == 2.0);
  CHECK(reported_value(Criterion::D(), -14.0) == -14.0);
  CHECK(reported_value(Criterion::E(), 0.2) == 0.2);
}

TEST_CASE("criterion construction checks") {
  CHECK_THROWS_AS(Criterion::c(Vector::Zero(3)), std::invalid_argument);
  Matrix asym(2, 2);
  asym << 1, 2, 0, 1;
  CHECK_THROWS_AS(Criterion::L(asym), std::invalid_argument);
  CHECK_THROWS_AS(Criterion::L(-Matrix::Identity(2, 2)), std::invalid_argument);
  CHECK(criterion_kind_from_string("c") == CriterionKind::c);
  CHECK_THROWS_AS(criterion_kind_from_string("G"), std::invalid_argument);
  CHECK_THROWS_AS(DesignMeasure(Matrix(2, 0)), std::invalid_argument);
  Matrix bad = Matrix::Zero(1, 2);
  bad(0, 1) = std::nan("");
  CHECK_THROWS_AS(DesignMeasure{bad}, std::invalid_argument);
  CHECK_THROWS_AS(info_matrix(DesignMeasure(Matrix::Zero(3, 4)), RegressionModel::second_order(2)),
                  std::invalid_argument);
}
