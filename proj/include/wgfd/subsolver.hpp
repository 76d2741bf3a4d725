#pragma once

#include "wgfd/models.hpp"

#include <iosfwd>
#include <vector>

namespace wgfd {

/// Subproblem max_{|w|=1} u(w), u(w) = lambda_min(sum_k w_k A_k), solved through
/// its relaxation min_{|w|<=1} h(w), h(w) = lambda_max(-sum_k w_k A_k).
struct SubsolverConfig {
  int max_iters = 5000;
  /// Stop once the target gap shrinks below this (absolute, objective units).
  double tol_sub = 1e-8;
};

struct SubproblemSolution {
  Vector w_star;
  double u_star = 0.0;
  /// The relaxation attained a negative h, so the unit-sphere optimum equals it.
  bool tight = false;
  bool converged = true;
  int iterations = 0;
};

/// u(w) = lambda_min(sum_k w_k A_k).
double min_eig_combination(const std::vector<Matrix>& a, const VectorRef& w);

/// Projected subgradient descent on h over the unit ball with target-level
/// Polyak steps. When h < 0 is reached the best iterate is rescaled onto the
/// unit sphere; otherwise u_star ~ 0 and w_star is returned as found.
/// Throws std::invalid_argument on an empty list, ragged sizes or a
/// non-symmetric matrix.
SubproblemSolution solve(const std::vector<Matrix>& a, const SubsolverConfig& cfg = {});

/// Grid search of u(w) over the unit sphere (s <= 3) followed by local grid
/// zooms around the best cells. Independent of solve(); used to check it.
/// Throws std::invalid_argument for s > 3.
SubproblemSolution brute_oracle(const std::vector<Matrix>& a, int grid_resolution = 400);

/// One oracle regression case as stored on disk.
struct MatrixListCase {
  std::vector<Matrix> matrices;
};

/// Plain-text matrix lists. Each case is a header line "s s1" followed by s
/// blocks of s1 x s1 whitespace-separated numbers; cases may repeat until EOF.
/// Lines starting with '#' are ignored.
std::vector<MatrixListCase> read_matrix_lists(std::istream& in);
void write_matrix_list(std::ostream& out, const std::vector<Matrix>& a);

}  // namespace wgfd
