#pragma once

#include <Eigen/Dense>

#include <string>
#include <variant>

namespace wgfd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;

/// Full quadratic response surface in k inputs. Features are ordered
/// (1, x_1..x_k, x_1^2..x_k^2, x_1x_2, x_1x_3, ..., x_{k-1}x_k).
struct SecondOrderSurface {
  int k = 1;
};

/// How the logistic model's feature vector weights the linear predictor.
///   paper:  f(x) = dmu/dtheta = mu(1-mu) v(x), so f f^T carries mu^2 (1-mu)^2.
///   fisher: f(x) = sqrt(mu(1-mu)) v(x), the classical GLM Fisher weight mu(1-mu).
enum class GlmWeight { paper, fisher };

/// Logistic regression linearized at a nominal parameter theta_star, with
/// v(x) = (1, x_1, ..., x_d) and mu = sigmoid(v(x)^T theta_star).
struct Logistic {
  Vector theta_star;
  GlmWeight weight = GlmWeight::paper;
};

std::string to_string(GlmWeight w);
GlmWeight glm_weight_from_string(const std::string& s);

class RegressionModel {
 public:
  using Family = std::variant<SecondOrderSurface, Logistic>;

  static RegressionModel second_order(int k);
  static RegressionModel logistic(Vector theta_star, GlmWeight weight = GlmWeight::paper);

  const Family& family() const { return family_; }
  int input_dim() const { return d_; }
  int feature_dim() const { return m_; }
  std::string name() const;

  /// f(x) in R^m. Throws std::invalid_argument on a dimension mismatch.
  Vector features(const VectorRef& x) const;

  /// Jacobian of f at x, m x d; row i is the gradient of feature i.
  Matrix jacobian(const VectorRef& x) const;

  /// Features of every column of a d x N point matrix, as an m x N matrix.
  Matrix feature_matrix(const Matrix& points) const;

  /// Both at once; the logistic model shares the sigmoid evaluation.
  void evaluate(const VectorRef& x, Vector& f, Matrix& jac) const;

 private:
  RegressionModel(Family family, int d, int m) : family_(std::move(family)), d_(d), m_(m) {}

  void check_dim(const VectorRef& x) const;

  Family family_;
  int d_;
  int m_;
};

/// Number of features of the full quadratic model in k inputs.
constexpr int second_order_feature_count(int k) { return 1 + 2 * k + k * (k - 1) / 2; }

struct Box {
  Vector lower;
  Vector upper;
};

struct Ball {
  int dim = 1;
  double radius = 1.0;
};

/// Compact design region: an axis-aligned box or a ball centered at the origin.
class DesignSpace {
 public:
  using Shape = std::variant<Box, Ball>;

  static DesignSpace box(Vector lower, Vector upper);
  static DesignSpace cube(int dim, double lo, double hi);
  static DesignSpace ball(int dim, double radius);

  const Shape& shape() const { return shape_; }
  int dim() const;
  bool is_box() const { return std::holds_alternative<Box>(shape_); }
  std::string name() const;

  bool contains(const VectorRef& x, double tol = 1e-12) const;

  /// Euclidean projection onto the region.
  Vector project(const VectorRef& x) const;
  void project_in_place(Eigen::Ref<Eigen::VectorXd> x) const;

  /// Per-coordinate extent: upper - lower for a box, 2r for a ball.
  Vector extent() const;

  /// Largest distance between two points of the region.
  double diameter() const;

 private:
  explicit DesignSpace(Shape shape) : shape_(std::move(shape)) {}

  Shape shape_;
};

}  // namespace wgfd
