#include "doctest.h"

#include "support.hpp"

#include "wgfd/errors.hpp"
#include "wgfd/wgrad.hpp"

using namespace wgfd;
using namespace wgfd::testing;

namespace {

const RegressionModel kSo2 = RegressionModel::second_order(2);

}  // namespace

TEST_CASE("log-det gradient is N times the particle gradient") {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 5; ++rep) {
    const Matrix pts = random_points(rng, 2, 12);
    const GradientField g = grad_D(DesignMeasure(pts), kSo2);
    const Matrix fd = fd_particle_gradient(
        pts, [&](const Matrix& p) { return direct_value(p, kSo2, Functional::logdet); });
    CHECK(rel_error(g.vectors, 12.0 * fd) < 1e-6);
  }
}

TEST_CASE("trace-inverse gradient for L = I, random L and c c^T") {
  std::mt19937_64 rng(22);
  for (int rep = 0; rep < 5; ++rep) {
    const Matrix pts = random_points(rng, 2, 10);
    const Vector c = random_vector(rng, 6);
    for (const Matrix& w : {Matrix(Matrix::Identity(6, 6)), random_psd(rng, 6),
                            Matrix(c * c.transpose())}) {
      const GradientField g = grad_L(DesignMeasure(pts), kSo2, w);
      const Matrix fd = fd_particle_gradient(
          pts, [&](const Matrix& p) { return direct_value(p, kSo2, Functional::trace_LMinv, w); });
      CHECK(rel_error(g.vectors, 10.0 * fd) < 1e-6);
    }
  }
}

TEST_CASE("simple-eigenvalue gradient") {
  std::mt19937_64 rng(23);
  int checked = 0;
  while (checked < 5) {
    const Matrix pts = random_points(rng, 2, 14);
    const InfoMatrix info = info_matrix(DesignMeasure(pts), kSo2);
    if (info.eigenvalues()[1] - info.eigenvalues()[0] < 1e-3) continue;
    const GradientField g = grad_E_simple(DesignMeasure(pts), kSo2);
    const Matrix fd = fd_particle_gradient(
        pts, [&](const Matrix& p) { return direct_value(p, kSo2, Functional::lambda_min); });
    CHECK(rel_error(g.vectors, 14.0 * fd) < 1e-5);
    ++checked;
  }
}

TEST_CASE("logistic gradients") {
  std::mt19937_64 rng(24);
  Vector theta(4);
  theta << 0.3, -0.7, 0.5, 0.2;
  for (GlmWeight w : {GlmWeight::paper, GlmWeight::fisher}) {
    const auto model = RegressionModel::logistic(theta, w);
    const Matrix pts = random_points(rng, 3, 15, -2, 2);
    const GradientField g = grad_D(DesignMeasure(pts), model);
    const Matrix fd = fd_particle_gradient(
        pts, [&](const Matrix& p) { return direct_value(p, model, Functional::logdet); });
    CHECK(rel_error(g.vectors, 15.0 * fd) < 1e-6);
  }
}

TEST_CASE("ascent field orientation") {
  std::mt19937_64 rng(25);
  const DesignMeasure mu(random_points(rng, 2, 12));
  const InfoMatrix info = info_matrix(mu, kSo2);
  const GradientField a = ascent_field(mu, kSo2, info, Criterion::A());
  const GradientField l = grad_L(mu, kSo2, Matrix::Identity(6, 6));
  CHECK((a.vectors + l.vectors).norm() < 1e-12);
  const GradientField d = ascent_field(mu, kSo2, info, Criterion::D());
  CHECK((d.vectors - grad_D(mu, kSo2).vectors).norm() < 1e-12);
  CHECK_THROWS_AS(ascent_field(mu, kSo2, info, Criterion::E()), std::logic_error);
}

TEST_CASE("repeated lambda_min is refused by the simple gradient") {
  // Symmetric under swapping and negating coordinates; the linear pair of
  // features carries lambda_min = 1/3 twice.
  Matrix pts = Matrix::Zero(2, 12);
  pts.leftCols(8) << 1, 1, -1, -1, 2, -2, 0, 0,
                     1, -1, 1, -1, 0, 0, 2, -2;
  const DesignMeasure mu(pts);
  const InfoMatrix info = info_matrix(mu, kSo2);
  REQUIRE(info.eigenvalues()[1] - info.eigenvalues()[0] < 1e-12);
  try {
    grad_E_simple(mu, kSo2);
    FAIL("expected MultiplicityError");
  } catch (const MultiplicityError& e) {
    CHECK(e.multiplicity() >= 2);
  }
}

TEST_CASE("singular measures throw for inverse-based gradients") {
  std::mt19937_64 rng(26);
  const DesignMeasure mu(random_points(rng, 2, 4));
  CHECK_THROWS_AS(grad_D(mu, kSo2), InfeasibleError);
  CHECK_THROWS_AS(grad_L(mu, kSo2, Matrix::Identity(6, 6)), InfeasibleError);
}

TEST_CASE("rho inner product and norm") {
  Matrix a(2, 2);
  a << 1, 0, 0, 2;
  Matrix b(2, 2);
  b << 3, 1, 1, 1;
  CHECK(inner_rho(a, b) == doctest::Approx((3.0 + 2.0) / 2.0));
  GradientField g{a, CriterionKind::D};
  CHECK(g.norm_rho() == doctest::Approx(std::sqrt(5.0 / 2.0)));
}

TEST_CASE("sign canonicalization") {
  Vector v(3);
  v << 0.0, -2.0, 1.0;
  canonicalize_sign(v);
  CHECK(v[1] == 2.0);
  CHECK(v[2] == -1.0);
}
