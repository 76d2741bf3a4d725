#pragma once

#include "wgfd/subsolver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace wgfd {

struct OracleCase {
  std::vector<Matrix> a;
  /// "random", "shared-identity", "repeated-min", "negative" or "file".
  std::string kind;
};

/// Random subproblem instances with s, s1 in {1, 2, 3}. Roughly a third are
/// built so that lambda_min of the optimal combination is repeated, and some
/// have no positive direction at all (u* <= 0).
std::vector<OracleCase> make_oracle_cases(int n, std::uint64_t seed);

struct OracleResult {
  std::string kind;
  int s = 0;
  int s1 = 0;
  double u_solve = 0.0;
  double u_oracle = 0.0;
  double diff = 0.0;
  bool pass = false;
};

struct OracleReport {
  std::vector<OracleResult> results;
  double max_diff = 0.0;
  int failures = 0;
};

/// Compares solve() against brute_oracle() case by case. Both values are
/// clipped at zero before comparing: on the ball the relaxation cannot go
/// below 0 (w = 0 is feasible) while the sphere oracle can.
OracleReport run_oracle_suite(const std::vector<OracleCase>& cases, double tol = 1e-3,
                              const SubsolverConfig& cfg = {}, int grid_resolution = 240);

}  // namespace wgfd
