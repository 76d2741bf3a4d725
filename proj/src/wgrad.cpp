#include "wgfd/wgrad.hpp"

#include "wgfd/errors.hpp"
#include "wgfd/esteep.hpp"

#include <cmath>

namespace wgfd {

namespace {

// g_i = scale * J_i^T (K f_i) for a fixed m x m matrix K.
GradientField quadratic_form_field(const DesignMeasure& measure, const RegressionModel& model,
                                   const Matrix& k, double scale, CriterionKind kind) {
  GradientField out{Matrix(measure.dim(), measure.size()), kind};
  Vector f;
  Matrix jac;
  for (int i = 0; i < measure.size(); ++i) {
    model.evaluate(measure.point(i), f, jac);
    out.vectors.col(i).noalias() = scale * (jac.transpose() * (k * f));
  }
  return out;
}

}  // namespace

double GradientField::norm_rho() const {
  if (vectors.cols() == 0) return 0.0;
  return std::sqrt(vectors.squaredNorm() / static_cast<double>(vectors.cols()));
}

double inner_rho(const Matrix& a, const Matrix& b) {
  return a.cwiseProduct(b).sum() / static_cast<double>(a.cols());
}

void canonicalize_sign(Eigen::Ref<Eigen::VectorXd> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0) {
      if (v[i] < 0.0) v = -v;
      return;
    }
  }
}

GradientField grad_L(const DesignMeasure& measure, const RegressionModel& model,
                     const Matrix& weight) {
  return grad_L(measure, model, info_matrix(measure, model), weight);
}

GradientField grad_L(const DesignMeasure& measure, const RegressionModel& model,
                     const InfoMatrix& info, const Matrix& weight) {
  const Matrix minv = info.inverse();
  const Matrix k = minv * weight * minv;
  return quadratic_form_field(measure, model, k, -2.0, CriterionKind::L);
}

GradientField grad_D(const DesignMeasure& measure, const RegressionModel& model) {
  return grad_D(measure, model, info_matrix(measure, model));
}

GradientField grad_D(const DesignMeasure& measure, const RegressionModel& model,
                     const InfoMatrix& info) {
  return quadratic_form_field(measure, model, info.inverse(), 2.0, CriterionKind::D);
}

GradientField grad_E_simple(const DesignMeasure& measure, const RegressionModel& model,
                            double tol_mult) {
  return grad_E_simple(measure, model, info_matrix(measure, model), tol_mult);
}

GradientField grad_E_simple(const DesignMeasure& measure, const RegressionModel& model,
                            const InfoMatrix& info, double tol_mult) {
  const EigenSubspace sub = multiplicity(info, tol_mult);
  if (sub.s1 != 1) throw MultiplicityError(sub.s1);
  Vector v = sub.basis.col(0);
  canonicalize_sign(v);

  GradientField out{Matrix(measure.dim(), measure.size()), CriterionKind::E};
  Vector f;
  Matrix jac;
  for (int i = 0; i < measure.size(); ++i) {
    model.evaluate(measure.point(i), f, jac);
    out.vectors.col(i).noalias() = (2.0 * v.dot(f)) * (jac.transpose() * v);
  }
  return out;
}

GradientField ascent_field(const DesignMeasure& measure, const RegressionModel& model,
                           const InfoMatrix& info, const Criterion& crit) {
  switch (crit.kind()) {
    case CriterionKind::D:
      return grad_D(measure, model, info);
    case CriterionKind::L:
    case CriterionKind::A:
    case CriterionKind::c: {
      GradientField g = grad_L(measure, model, info, crit.effective_L(model.feature_dim()));
      g.vectors = -g.vectors;
      g.kind = crit.kind();
      return g;
    }
    case CriterionKind::E:
      break;
  }
  throw std::logic_error("ascent_field does not handle the E criterion");
}

}  // namespace wgfd
