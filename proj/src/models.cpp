#include "wgfd/models.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace wgfd {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double sigmoid(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// f is presized to the feature count.
void eval_second_order(int k, const VectorRef& x, Eigen::Ref<Vector> f, Matrix* jac) {
  const int m = second_order_feature_count(k);
  f[0] = 1.0;
  for (int i = 0; i < k; ++i) {
    f[1 + i] = x[i];
    f[1 + k + i] = x[i] * x[i];
  }
  int row = 1 + 2 * k;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) f[row++] = x[i] * x[j];

  if (jac == nullptr) return;
  Matrix& J = *jac;
  J.setZero(m, k);
  for (int i = 0; i < k; ++i) {
    J(1 + i, i) = 1.0;
    J(1 + k + i, i) = 2.0 * x[i];
  }
  row = 1 + 2 * k;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      J(row, i) = x[j];
      J(row, j) = x[i];
      ++row;
    }
  }
}

void eval_logistic(const Logistic& lg, const VectorRef& x, Eigen::Ref<Vector> f, Matrix* jac) {
  const auto d = x.size();
  const Vector& theta = lg.theta_star;
  const double eta = theta[0] + theta.tail(d).dot(x);
  const double mu = sigmoid(eta);
  const double w = mu * (1.0 - mu);

  // scale(eta) multiplies v(x); dscale is its derivative in eta.
  double scale = 0.0;
  double dscale = 0.0;
  switch (lg.weight) {
    case GlmWeight::paper:
      scale = w;
      dscale = w * (1.0 - 2.0 * mu);
      break;
    case GlmWeight::fisher:
      scale = std::sqrt(w);
      dscale = 0.5 * scale * (1.0 - 2.0 * mu);
      break;
  }

  f[0] = scale;
  f.tail(d) = scale * x;

  if (jac == nullptr) return;
  Matrix& J = *jac;
  J.resize(d + 1, d);
  // d/dx [scale * v] = dscale * v theta_tilde^T + scale * dv/dx
  Vector v(d + 1);
  v[0] = 1.0;
  v.tail(d) = x;
  J.noalias() = dscale * v * theta.tail(d).transpose();
  J.bottomRows(d).diagonal().array() += scale;
}

}  // namespace

std::string to_string(GlmWeight w) { return w == GlmWeight::paper ? "paper" : "fisher"; }

GlmWeight glm_weight_from_string(const std::string& s) {
  if (s == "paper") return GlmWeight::paper;
  if (s == "fisher") return GlmWeight::fisher;
  throw std::invalid_argument("unknown glm weight '" + s + "' (expected paper|fisher)");
}

RegressionModel RegressionModel::second_order(int k) {
  if (k < 1) throw std::invalid_argument("second-order model needs k >= 1");
  return RegressionModel(SecondOrderSurface{k}, k, second_order_feature_count(k));
}

RegressionModel RegressionModel::logistic(Vector theta_star, GlmWeight weight) {
  if (theta_star.size() < 2)
    throw std::invalid_argument("logistic model needs theta_star of length d + 1 >= 2");
  if (!theta_star.allFinite()) throw std::invalid_argument("theta_star must be finite");
  const int d = static_cast<int>(theta_star.size()) - 1;
  return RegressionModel(Logistic{std::move(theta_star), weight}, d, d + 1);
}

std::string RegressionModel::name() const {
  return std::visit(Overloaded{
                        [](const SecondOrderSurface& s) { return fmt::format("so{}", s.k); },
                        [](const Logistic& l) {
                          return fmt::format("logistic{}-{}", l.theta_star.size() - 1,
                                             to_string(l.weight));
                        },
                    },
                    family_);
}

void RegressionModel::check_dim(const VectorRef& x) const {
  if (x.size() != d_)
    throw std::invalid_argument(
        fmt::format("point has dimension {}, model expects {}", x.size(), d_));
}

Vector RegressionModel::features(const VectorRef& x) const {
  check_dim(x);
  Vector f(m_);
  std::visit(Overloaded{
                 [&](const SecondOrderSurface& s) { eval_second_order(s.k, x, f, nullptr); },
                 [&](const Logistic& l) { eval_logistic(l, x, f, nullptr); },
             },
             family_);
  return f;
}

Matrix RegressionModel::jacobian(const VectorRef& x) const {
  Vector f;
  Matrix J;
  evaluate(x, f, J);
  return J;
}

void RegressionModel::evaluate(const VectorRef& x, Vector& f, Matrix& jac) const {
  check_dim(x);
  f.resize(m_);
  std::visit(Overloaded{
                 [&](const SecondOrderSurface& s) { eval_second_order(s.k, x, f, &jac); },
                 [&](const Logistic& l) { eval_logistic(l, x, f, &jac); },
             },
             family_);
}

Matrix RegressionModel::feature_matrix(const Matrix& points) const {
  if (points.rows() != d_)
    throw std::invalid_argument(
        fmt::format("points have dimension {}, model expects {}", points.rows(), d_));
  Matrix out(m_, points.cols());
  std::visit(Overloaded{
                 [&](const SecondOrderSurface& s) {
                   for (Eigen::Index i = 0; i < points.cols(); ++i)
                     eval_second_order(s.k, points.col(i), out.col(i), nullptr);
                 },
                 [&](const Logistic& l) {
                   for (Eigen::Index i = 0; i < points.cols(); ++i)
                     eval_logistic(l, points.col(i), out.col(i), nullptr);
                 },
             },
             family_);
  return out;
}

DesignSpace DesignSpace::box(Vector lower, Vector upper) {
  if (lower.size() != upper.size() || lower.size() == 0)
    throw std::invalid_argument("box bounds must be non-empty and of equal length");
  if (!(lower.array() < upper.array()).all())
    throw std::invalid_argument("box needs lower < upper componentwise");
  return DesignSpace(Box{std::move(lower), std::move(upper)});
}

DesignSpace DesignSpace::cube(int dim, double lo, double hi) {
  return box(Vector::Constant(dim, lo), Vector::Constant(dim, hi));
}

DesignSpace DesignSpace::ball(int dim, double radius) {
  if (dim < 1) throw std::invalid_argument("ball dimension must be >= 1");
  if (!(radius > 0)) throw std::invalid_argument("ball radius must be positive");
  return DesignSpace(Ball{dim, radius});
}

int DesignSpace::dim() const {
  return std::visit(Overloaded{
                        [](const Box& b) { return static_cast<int>(b.lower.size()); },
                        [](const Ball& b) { return b.dim; },
                    },
                    shape_);
}

std::string DesignSpace::name() const {
  return std::visit(Overloaded{
                        [](const Box& b) {
                          return fmt::format("box{}[{},{}]", b.lower.size(), b.lower.minCoeff(),
                                             b.upper.maxCoeff());
                        },
                        [](const Ball& b) { return fmt::format("ball{}(r={})", b.dim, b.radius); },
                    },
                    shape_);
}

bool DesignSpace::contains(const VectorRef& x, double tol) const {
  if (x.size() != dim()) return false;
  return std::visit(Overloaded{
                        [&](const Box& b) {
                          return ((x.array() >= b.lower.array() - tol) &&
                                  (x.array() <= b.upper.array() + tol))
                              .all();
                        },
                        [&](const Ball& b) { return x.norm() <= b.radius * (1.0 + tol); },
                    },
                    shape_);
}

Vector DesignSpace::project(const VectorRef& x) const {
  Vector y = x;
  project_in_place(y);
  return y;
}

void DesignSpace::project_in_place(Eigen::Ref<Eigen::VectorXd> x) const {
  std::visit(Overloaded{
                 [&](const Box& b) { x = x.cwiseMax(b.lower).cwiseMin(b.upper); },
                 [&](const Ball& b) {
                   const double n = x.norm();
                   if (n > b.radius) x *= b.radius / n;
                 },
             },
             shape_);
}

Vector DesignSpace::extent() const {
  return std::visit(Overloaded{
                        [](const Box& b) -> Vector { return b.upper - b.lower; },
                        [](const Ball& b) -> Vector {
                          return Vector::Constant(b.dim, 2.0 * b.radius);
                        },
                    },
                    shape_);
}

double DesignSpace::diameter() const {
  return std::visit(Overloaded{
                        [](const Box& b) { return (b.upper - b.lower).norm(); },
                        [](const Ball& b) { return 2.0 * b.radius; },
                    },
                    shape_);
}

}  // namespace wgfd
