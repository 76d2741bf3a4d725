#pragma once

#include "wgfd/models.hpp"

#include <optional>
#include <string>

namespace wgfd {

/// Empirical measure (1/N) sum_i delta_{x_i}. Points are stored column-wise,
/// one particle per column of a d x N matrix.
class DesignMeasure {
 public:
  explicit DesignMeasure(Matrix points);

  int size() const { return static_cast<int>(points_.cols()); }
  int dim() const { return static_cast<int>(points_.rows()); }

  const Matrix& points() const { return points_; }
  auto point(int i) const { return points_.col(i); }

  // The flow engine moves particles in place; callers keep points finite.
  Matrix& mutable_points() { return points_; }

 private:
  Matrix points_;
};

/// Symmetric PSD information matrix with its spectral decomposition.
/// Immutable once built.
class InfoMatrix {
 public:
  explicit InfoMatrix(const Matrix& m);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  /// Ascending.
  const Vector& eigenvalues() const { return evals_; }
  /// Orthonormal; column j pairs with eigenvalues()[j].
  const Matrix& eigenvectors() const { return evecs_; }

  double lambda_min() const { return evals_[0]; }
  double lambda_max() const { return evals_[evals_.size() - 1]; }

  /// Threshold under which the matrix counts as singular: 1e-10 * max(1, lambda_max).
  double singular_tol() const;
  bool is_singular() const { return lambda_min() <= singular_tol(); }

  /// M^{-1} b through the eigenbasis. Throws InfeasibleError when singular.
  Vector solve(const VectorRef& b) const;
  Matrix inverse() const;
  double log_det() const;

 private:
  Matrix m_;
  Vector evals_;
  Matrix evecs_;
};

/// (1/N) sum_i f(x_i) f(x_i)^T without decomposing it.
Matrix moment_matrix(const DesignMeasure& measure, const RegressionModel& model);

/// Information matrix of the measure. Throws NumericError on non-finite features.
InfoMatrix info_matrix(const DesignMeasure& measure, const RegressionModel& model);

enum class CriterionKind { E, D, L, A, c };

/// Optimality criterion. Internally every criterion is maximized:
///   E -> lambda_min(M), D -> log det M, L -> -tr(L M^-1), A -> -tr(M^-1),
///   c -> -c^T M^-1 c.
class Criterion {
 public:
  static Criterion E() { return Criterion(CriterionKind::E); }
  static Criterion D() { return Criterion(CriterionKind::D); }
  static Criterion A() { return Criterion(CriterionKind::A); }
  static Criterion L(Matrix weight);
  static Criterion c(Vector direction);

  CriterionKind kind() const { return kind_; }
  std::string name() const;

  /// Weight matrix of the equivalent L-criterion (I for A, c c^T for c).
  Matrix effective_L(int m) const;
  const Matrix& weight() const { return weight_; }
  const Vector& direction() const { return direction_; }

  bool needs_inverse() const { return kind_ != CriterionKind::E; }
  /// L, A and c are minimized in their usual statement; reports flip the sign back.
  bool reported_as_minimum() const {
    return kind_ == CriterionKind::L || kind_ == CriterionKind::A || kind_ == CriterionKind::c;
  }

 private:
  explicit Criterion(CriterionKind k) : kind_(k) {}

  CriterionKind kind_;
  Matrix weight_;
  Vector direction_;
};

CriterionKind criterion_kind_from_string(const std::string& s);
std::string to_string(CriterionKind k);

/// Larger is better. Inverse-based criteria return -infinity on a singular M.
double criterion_value(const InfoMatrix& info, const Criterion& crit);
double criterion_value(const DesignMeasure& measure, const RegressionModel& model,
                       const Criterion& crit);

/// Fast evaluation straight from a moment matrix (no eigenvectors); same values
/// as criterion_value up to roundoff.
double criterion_value_fast(const Matrix& m, const Criterion& crit);

/// Converts an internal (maximized) value to the criterion's customary orientation.
double reported_value(const Criterion& crit, double internal);

}  // namespace wgfd
