#pragma once

// Test-side oracles: finite differences and random instances. Nothing here
// calls the gradient or steepest-direction code under test.

#include "wgfd/design.hpp"
#include "wgfd/models.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <functional>
#include <random>

namespace wgfd::testing {

inline Matrix random_points(std::mt19937_64& rng, int d, int n, double lo = -1.0,
                            double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix p(d, n);
  for (Eigen::Index k = 0; k < p.size(); ++k) p.data()[k] = u(rng);
  return p;
}

inline Matrix random_psd(std::mt19937_64& rng, int m) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix b(m, m);
  for (Eigen::Index k = 0; k < b.size(); ++k) b.data()[k] = g(rng);
  return b * b.transpose() / m;
}

inline Vector random_vector(std::mt19937_64& rng, int m) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(m);
  for (int i = 0; i < m; ++i) v[i] = g(rng);
  return v;
}

/// F_N evaluated straight from the definitions with a plain dense inverse,
/// independent of InfoMatrix. Minimized functionals (L, A, c) are returned in
/// their usual (minimized) orientation.
enum class Functional { logdet, lambda_min, trace_LMinv };

inline Matrix direct_moment(const Matrix& points, const RegressionModel& model) {
  Matrix m = Matrix::Zero(model.feature_dim(), model.feature_dim());
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    const Vector f = model.features(points.col(i));
    m += f * f.transpose();
  }
  return m / static_cast<double>(points.cols());
}

inline double direct_value(const Matrix& points, const RegressionModel& model, Functional fn,
                           const Matrix& weight = Matrix()) {
  const Matrix m = direct_moment(points, model);
  switch (fn) {
    case Functional::logdet:
      return std::log(m.determinant());
    case Functional::lambda_min: {
      Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
      return es.eigenvalues()[0];
    }
    case Functional::trace_LMinv:
      return (weight * m.inverse()).trace();
  }
  return 0.0;
}

/// Central-difference gradient of F_N with respect to every particle, d x N.
inline Matrix fd_particle_gradient(const Matrix& points,
                                   const std::function<double(const Matrix&)>& f,
                                   double h = 1e-5) {
  Matrix g(points.rows(), points.cols());
  Matrix p = points;
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    for (Eigen::Index j = 0; j < points.rows(); ++j) {
      const double x = p(j, i);
      p(j, i) = x + h;
      const double up = f(p);
      p(j, i) = x - h;
      const double dn = f(p);
      p(j, i) = x;
      g(j, i) = (up - dn) / (2.0 * h);
    }
  }
  return g;
}

/// Central-difference Jacobian of the feature map at x, m x d.
inline Matrix fd_jacobian(const RegressionModel& model, const Vector& x, double h = 1e-6) {
  Matrix j(model.feature_dim(), model.input_dim());
  Vector p = x;
  for (int c = 0; c < model.input_dim(); ++c) {
    p[c] = x[c] + h;
    const Vector up = model.features(p);
    p[c] = x[c] - h;
    const Vector dn = model.features(p);
    p[c] = x[c];
    j.col(c) = (up - dn) / (2.0 * h);
  }
  return j;
}

inline double rel_error(const Matrix& a, const Matrix& b) {
  const double scale = std::max(b.norm(), 1e-300);
  return (a - b).norm() / scale;
}

}  // namespace wgfd::testing
