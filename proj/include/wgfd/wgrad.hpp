#pragma once

#include "wgfd/design.hpp"

namespace wgfd {

/// Per-particle vector field evaluated at the particles of a measure, stored
/// d x N like DesignMeasure::points().
struct GradientField {
  Matrix vectors;
  CriterionKind kind = CriterionKind::E;

  int size() const { return static_cast<int>(vectors.cols()); }
  /// sqrt((1/N) sum_i |g_i|^2)
  double norm_rho() const;
};

/// <a, b>_rho = (1/N) sum_i a_i^T b_i for fields stored column-wise.
double inner_rho(const Matrix& a, const Matrix& b);

/// Wasserstein gradient of F_L(rho) = tr(L M^-1) (a descent field for that
/// minimized functional): g_i = -2 J_i^T M^-1 L M^-1 f_i.
/// Throws InfeasibleError when M is singular.
GradientField grad_L(const DesignMeasure& measure, const RegressionModel& model,
                     const Matrix& weight);
GradientField grad_L(const DesignMeasure& measure, const RegressionModel& model,
                     const InfoMatrix& info, const Matrix& weight);

/// Wasserstein gradient of log det M: g_i = 2 J_i^T M^-1 f_i.
GradientField grad_D(const DesignMeasure& measure, const RegressionModel& model);
GradientField grad_D(const DesignMeasure& measure, const RegressionModel& model,
                     const InfoMatrix& info);

/// Wasserstein gradient of lambda_min(M) when lambda_min is simple:
/// g_i = 2 (v^T f_i) J_i^T v with v the unit minimal eigenvector.
/// Throws MultiplicityError when the eigenvalue band at lambda_min holds more
/// than one eigenvalue under tol_mult (see esteep::multiplicity).
GradientField grad_E_simple(const DesignMeasure& measure, const RegressionModel& model,
                            double tol_mult = 1e-6);
GradientField grad_E_simple(const DesignMeasure& measure, const RegressionModel& model,
                            const InfoMatrix& info, double tol_mult = 1e-6);

/// Ascent field of the internally maximized criterion (D, L, A, c). E is
/// handled by the flow engine since it may need the steepest-ascent pipeline.
GradientField ascent_field(const DesignMeasure& measure, const RegressionModel& model,
                           const InfoMatrix& info, const Criterion& crit);

/// Flips v so its first nonzero coordinate is positive.
void canonicalize_sign(Eigen::Ref<Eigen::VectorXd> v);

}  // namespace wgfd
