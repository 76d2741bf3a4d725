#include "wgfd/esteep.hpp"

#include "wgfd/wgrad.hpp"

#include <cmath>

namespace wgfd {

EigenSubspace multiplicity(const InfoMatrix& info, double tol_mult) {
  const Vector& ev = info.eigenvalues();
  const double band = ev[0] + tol_mult * std::max(1.0, info.lambda_max());
  int s1 = 1;
  while (s1 < ev.size() && ev[s1] <= band) ++s1;

  EigenSubspace sub;
  sub.lambda_min = ev[0];
  sub.s1 = s1;
  sub.basis = info.eigenvectors().leftCols(s1);
  if (s1 == 1) canonicalize_sign(sub.basis.col(0));
  return sub;
}

BasisFields build_basis(const DesignMeasure& measure, const RegressionModel& model,
                        const EigenSubspace& sub, double rank_tol) {
  const int n = measure.size();
  const int d = measure.dim();
  const int s1 = sub.s1;

  BasisFields out;
  out.s1 = s1;
  out.psi.assign(static_cast<std::size_t>(s1 * s1), Matrix(d, n));

  Vector f;
  Matrix jac;
  for (int p = 0; p < n; ++p) {
    model.evaluate(measure.point(p), f, jac);
    const Vector proj = sub.basis.transpose() * f;    // v_j^T f
    const Matrix grads = jac.transpose() * sub.basis;  // J^T v_i, d x s1
    for (int i = 0; i < s1; ++i)
      for (int j = 0; j < s1; ++j)
        out.psi[static_cast<std::size_t>(i * s1 + j)].col(p) = grads.col(i) * proj[j];
  }

  double max_norm = 0.0;
  for (const Matrix& c : out.psi) max_norm = std::max(max_norm, std::sqrt(inner_rho(c, c)));
  if (max_norm == 0.0) return out;

  for (const Matrix& cand : out.psi) {
    Matrix r = cand;
    for (int pass = 0; pass < 2; ++pass)
      for (const Matrix& q : out.phi) r -= inner_rho(q, r) * q;
    const double nr = std::sqrt(inner_rho(r, r));
    if (nr <= rank_tol * max_norm) continue;
    out.phi.push_back(r / nr);
  }
  return out;
}

std::vector<Matrix> assemble_A(const BasisFields& basis) {
  const int s1 = basis.s1;
  std::vector<Matrix> a;
  a.reserve(basis.phi.size());
  for (const Matrix& phi : basis.phi) {
    Matrix ak(s1, s1);
    for (int i = 0; i < s1; ++i) {
      for (int j = i; j < s1; ++j) {
        const double v = inner_rho(phi, basis.psi_at(i, j)) + inner_rho(phi, basis.psi_at(j, i));
        ak(i, j) = v;
        ak(j, i) = v;
      }
    }
    a.push_back(std::move(ak));
  }
  return a;
}

AscentDirection steepest_direction(const DesignMeasure& measure, const RegressionModel& model,
                                   const EsteepConfig& cfg) {
  return steepest_direction(measure, model, info_matrix(measure, model), cfg);
}

AscentDirection steepest_direction(const DesignMeasure& measure, const RegressionModel& model,
                                   const InfoMatrix& info, const EsteepConfig& cfg) {
  const EigenSubspace sub = multiplicity(info, cfg.tol_mult);
  const BasisFields basis = build_basis(measure, model, sub, cfg.rank_tol);

  AscentDirection dir;
  dir.velocity = Matrix::Zero(measure.dim(), measure.size());
  dir.s1 = sub.s1;
  dir.s = basis.s();
  if (basis.s() == 0) {
    dir.w_star = Vector();
    dir.stop = true;
    return dir;
  }

  const SubproblemSolution sol = solve(assemble_A(basis), cfg.subsolver);
  dir.u_star = sol.u_star;
  dir.w_star = sol.w_star;
  for (int k = 0; k < basis.s(); ++k)
    dir.velocity += sol.w_star[k] * basis.phi[static_cast<std::size_t>(k)];
  dir.velocity *= sol.u_star;
  dir.stop = sol.u_star <= cfg.stop_tol;
  return dir;
}

Matrix perturbation_matrix(const DesignMeasure& measure, const RegressionModel& model,
                           const Matrix& phi) {
  const int m = model.feature_dim();
  Matrix b = Matrix::Zero(m, m);
  Vector f;
  Matrix jac;
  for (int i = 0; i < measure.size(); ++i) {
    model.evaluate(measure.point(i), f, jac);
    const Vector jp = jac * phi.col(i);
    b.noalias() += jp * f.transpose();
  }
  b = (b + b.transpose()).eval();
  return b / static_cast<double>(measure.size());
}

}  // namespace wgfd
