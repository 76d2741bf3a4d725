#pragma once

#include "wgfd/design.hpp"
#include "wgfd/subsolver.hpp"

#include <vector>

namespace wgfd {

/// Eigenvectors spanning the numerical lambda_min band of an information matrix.
struct EigenSubspace {
  double lambda_min = 0.0;
  int s1 = 1;
  /// m x s1, orthonormal columns.
  Matrix basis;
};

/// s1 = #{ j : lambda_j <= lambda_1 + tol_mult * max(1, lambda_max) }.
EigenSubspace multiplicity(const InfoMatrix& info, double tol_mult = 1e-6);

/// Candidate fields psi_ij(x) = J(x)^T v_i (v_j^T f(x)) and their orthonormal
/// basis phi_k under <a, b>_rho = (1/N) sum_i a_i^T b_i. Fields are d x N.
struct BasisFields {
  int s1 = 0;
  /// psi[i * s1 + j] is psi_ij.
  std::vector<Matrix> psi;
  std::vector<Matrix> phi;

  const Matrix& psi_at(int i, int j) const { return psi[static_cast<std::size_t>(i * s1 + j)]; }
  int s() const { return static_cast<int>(phi.size()); }
};

/// Modified Gram-Schmidt (two passes) over the s1^2 candidates; a candidate
/// whose residual norm is <= rank_tol * (largest candidate norm) is dropped.
BasisFields build_basis(const DesignMeasure& measure, const RegressionModel& model,
                        const EigenSubspace& sub, double rank_tol = 1e-8);

/// A_k(i, j) = <phi_k, psi_ij + psi_ji>_rho, one s1 x s1 matrix per basis field.
std::vector<Matrix> assemble_A(const BasisFields& basis);

struct EsteepConfig {
  double tol_mult = 1e-6;
  double rank_tol = 1e-8;
  double stop_tol = 1e-6;
  SubsolverConfig subsolver;
};

struct AscentDirection {
  /// d x N; u_star * sum_k w_k phi_k at the particles.
  Matrix velocity;
  double u_star = 0.0;
  Vector w_star;
  bool stop = true;
  int s1 = 0;
  int s = 0;
};

/// Wasserstein steepest-ascent direction of lambda_min(M_rho).
AscentDirection steepest_direction(const DesignMeasure& measure, const RegressionModel& model,
                                   const EsteepConfig& cfg = {});
AscentDirection steepest_direction(const DesignMeasure& measure, const RegressionModel& model,
                                   const InfoMatrix& info, const EsteepConfig& cfg = {});

/// (1/N) sum_i (J_i phi_i f_i^T + f_i phi_i^T J_i^T): the first-order change of M
/// when particles move with velocity phi.
Matrix perturbation_matrix(const DesignMeasure& measure, const RegressionModel& model,
                           const Matrix& phi);

}  // namespace wgfd
