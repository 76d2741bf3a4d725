#include "wgfd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace wgfd {

namespace {

Matrix random_symmetric(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = g(rng);
  return m;
}

Matrix random_orthogonal(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(n, n);
  for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = g(rng);
  Eigen::HouseholderQR<Matrix> qr(m);
  return qr.householderQ();
}

}  // namespace

std::vector<OracleCase> make_oracle_cases(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dim(1, 3);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<OracleCase> cases;
  cases.reserve(static_cast<std::size_t>(std::max(n, 0)));

  for (int c = 0; c < n; ++c) {
    const int s = dim(rng);
    const int s1 = dim(rng);
    OracleCase oc;
    switch (c % 4) {
      case 0:
        oc.kind = "random";
        for (int k = 0; k < s; ++k) oc.a.push_back(random_symmetric(rng, s1));
        break;
      case 1: {
        // A_1 = I dominates: the optimum sits at w = e_1 with every eigenvalue tied.
        oc.kind = "shared-identity";
        oc.a.push_back(Matrix::Identity(s1, s1));
        for (int k = 1; k < s; ++k) oc.a.push_back(0.3 * random_symmetric(rng, s1));
        break;
      }
      case 2: {
        // Common eigenbasis with a repeated smallest eigenvalue in every A_k.
        oc.kind = "repeated-min";
        const Matrix q = random_orthogonal(rng, s1);
        for (int k = 0; k < s; ++k) {
          Vector ev(s1);
          const double low = g(rng);
          for (int i = 0; i < s1; ++i) ev[i] = i < 2 ? low : low + std::abs(g(rng)) + 0.1;
          oc.a.push_back(q * ev.asDiagonal() * q.transpose());
        }
        break;
      }
      default: {
        // Traceless family: no combination is positive definite when s1 > 1.
        oc.kind = "negative";
        for (int k = 0; k < s; ++k) {
          Matrix m = random_symmetric(rng, s1);
          if (s1 > 1) m -= (m.trace() / s1) * Matrix::Identity(s1, s1);
          oc.a.push_back(std::move(m));
        }
        break;
      }
    }
    cases.push_back(std::move(oc));
  }
  return cases;
}

OracleReport run_oracle_suite(const std::vector<OracleCase>& cases, double tol,
                              const SubsolverConfig& cfg, int grid_resolution) {
  OracleReport report;
  for (const OracleCase& oc : cases) {
    OracleResult r;
    r.kind = oc.kind;
    r.s = static_cast<int>(oc.a.size());
    r.s1 = oc.a.empty() ? 0 : static_cast<int>(oc.a.front().rows());
    r.u_solve = solve(oc.a, cfg).u_star;
    r.u_oracle = brute_oracle(oc.a, grid_resolution).u_star;
    r.diff = std::abs(std::max(r.u_solve, 0.0) - std::max(r.u_oracle, 0.0));
    r.pass = r.diff <= tol;
    report.max_diff = std::max(report.max_diff, r.diff);
    if (!r.pass) ++report.failures;
    report.results.push_back(r);
  }
  return report;
}

}  // namespace wgfd
