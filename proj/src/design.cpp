#include "wgfd/design.hpp"

#include "wgfd/errors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace wgfd {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double singular_threshold(double lambda_max) { return 1e-10 * std::max(1.0, lambda_max); }

}  // namespace

DesignMeasure::DesignMeasure(Matrix points) : points_(std::move(points)) {
  if (points_.cols() < 1) throw std::invalid_argument("a design needs at least one particle");
  if (points_.rows() < 1) throw std::invalid_argument("design points need dimension >= 1");
  if (!points_.allFinite()) throw std::invalid_argument("design points must be finite");
}

InfoMatrix::InfoMatrix(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw std::invalid_argument("information matrix must be square and non-empty");
  if (!m.allFinite()) throw NumericError("information matrix has non-finite entries");
  m_ = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(m_);
  if (es.info() != Eigen::Success) throw NumericError("symmetric eigensolver failed");
  evals_ = es.eigenvalues();
  evecs_ = es.eigenvectors();
}

double InfoMatrix::singular_tol() const { return singular_threshold(lambda_max()); }

Vector InfoMatrix::solve(const VectorRef& b) const {
  if (is_singular()) throw InfeasibleError("information matrix is singular");
  Vector coef = evecs_.transpose() * b;
  coef.array() /= evals_.array();
  return evecs_ * coef;
}

Matrix InfoMatrix::inverse() const {
  if (is_singular()) throw InfeasibleError("information matrix is singular");
  return evecs_ * evals_.cwiseInverse().asDiagonal() * evecs_.transpose();
}

double InfoMatrix::log_det() const {
  if (is_singular()) return kNegInf;
  return evals_.array().log().sum();
}

Matrix moment_matrix(const DesignMeasure& measure, const RegressionModel& model) {
  if (measure.dim() != model.input_dim())
    throw std::invalid_argument(fmt::format("design dimension {} does not match model input {}",
                                            measure.dim(), model.input_dim()));
  const int n = measure.size();
  const Matrix feats = model.feature_matrix(measure.points());
  if (!feats.allFinite()) throw NumericError("non-finite feature values");
  Matrix m = Matrix::Zero(model.feature_dim(), model.feature_dim());
  m.selfadjointView<Eigen::Lower>().rankUpdate(feats, 1.0 / n);
  return m.selfadjointView<Eigen::Lower>();
}

InfoMatrix info_matrix(const DesignMeasure& measure, const RegressionModel& model) {
  return InfoMatrix(moment_matrix(measure, model));
}

Criterion Criterion::L(Matrix weight) {
  if (weight.rows() != weight.cols() || weight.rows() == 0)
    throw std::invalid_argument("L weight must be square");
  if (!weight.isApprox(weight.transpose(), 1e-12))
    throw std::invalid_argument("L weight must be symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(weight, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()[0] < -1e-12 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff()))
    throw std::invalid_argument("L weight must be positive semidefinite");
  Criterion c(CriterionKind::L);
  c.weight_ = std::move(weight);
  return c;
}

Criterion Criterion::c(Vector direction) {
  if (direction.size() == 0 || direction.isZero(0.0))
    throw std::invalid_argument("c direction must be nonzero");
  Criterion cr(CriterionKind::c);
  cr.direction_ = std::move(direction);
  return cr;
}

std::string Criterion::name() const { return to_string(kind_); }

Matrix Criterion::effective_L(int m) const {
  switch (kind_) {
    case CriterionKind::A:
      return Matrix::Identity(m, m);
    case CriterionKind::L:
      if (weight_.rows() != m) throw std::invalid_argument("L weight size does not match model");
      return weight_;
    case CriterionKind::c:
      if (direction_.size() != m) throw std::invalid_argument("c size does not match model");
      return direction_ * direction_.transpose();
    default:
      throw std::logic_error("criterion " + name() + " has no L weight");
  }
}

CriterionKind criterion_kind_from_string(const std::string& s) {
  if (s == "E") return CriterionKind::E;
  if (s == "D") return CriterionKind::D;
  if (s == "L") return CriterionKind::L;
  if (s == "A") return CriterionKind::A;
  if (s == "c") return CriterionKind::c;
  throw std::invalid_argument("unknown criterion '" + s + "' (expected E|D|L|A|c)");
}

std::string to_string(CriterionKind k) {
  switch (k) {
    case CriterionKind::E: return "E";
    case CriterionKind::D: return "D";
    case CriterionKind::L: return "L";
    case CriterionKind::A: return "A";
    case CriterionKind::c: return "c";
  }
  return "?";
}

double criterion_value(const InfoMatrix& info, const Criterion& crit) {
  switch (crit.kind()) {
    case CriterionKind::E:
      return info.lambda_min();
    case CriterionKind::D:
      return info.log_det();
    case CriterionKind::A:
      if (info.is_singular()) return kNegInf;
      return -info.eigenvalues().cwiseInverse().sum();
    case CriterionKind::L: {
      if (info.is_singular()) return kNegInf;
      return -(crit.weight() * info.inverse()).trace();
    }
    case CriterionKind::c:
      if (info.is_singular()) return kNegInf;
      return -crit.direction().dot(info.solve(crit.direction()));
  }
  return kNegInf;
}

double criterion_value(const DesignMeasure& measure, const RegressionModel& model,
                       const Criterion& crit) {
  return criterion_value(info_matrix(measure, model), crit);
}

double criterion_value_fast(const Matrix& m, const Criterion& crit) {
  if (crit.kind() != CriterionKind::E && crit.kind() != CriterionKind::D)
    return criterion_value(InfoMatrix(m), crit);
  if (crit.kind() == CriterionKind::D) {
    // lambda_max <= trace, so a Cholesky of M - tau(trace) I certifies that M
    // clears the singular threshold; only uncertain cases need eigenvalues.
    const Eigen::Index n = m.rows();
    const double tau = singular_threshold(m.trace());
    Eigen::LLT<Matrix> shifted(m - tau * Matrix::Identity(n, n));
    if (shifted.info() == Eigen::Success) {
      Eigen::LLT<Matrix> llt(m);
      if (llt.info() == Eigen::Success)
        return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("symmetric eigensolver failed");
  const Vector& ev = es.eigenvalues();
  if (crit.kind() == CriterionKind::E) return ev[0];
  if (ev[0] <= singular_threshold(ev[ev.size() - 1])) return kNegInf;
  return ev.array().log().sum();
}

double reported_value(const Criterion& crit, double internal) {
  return crit.reported_as_minimum() ? -internal : internal;
}

}  // namespace wgfd
