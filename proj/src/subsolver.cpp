#include "wgfd/subsolver.hpp"

#include "wgfd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <random>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

namespace wgfd {

namespace {

void validate(const std::vector<Matrix>& a) {
  if (a.empty()) throw std::invalid_argument("subproblem needs at least one matrix");
  const auto n = a.front().rows();
  for (const Matrix& m : a) {
    if (m.rows() != n || m.cols() != n || n == 0)
      throw std::invalid_argument("subproblem matrices must be square and of equal size");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
      throw std::invalid_argument("subproblem matrices must be symmetric");
  }
}

Matrix combine(const std::vector<Matrix>& a, const VectorRef& w) {
  Matrix s = Matrix::Zero(a.front().rows(), a.front().cols());
  for (std::size_t k = 0; k < a.size(); ++k) s.noalias() += w[static_cast<Eigen::Index>(k)] * a[k];
  return 0.5 * (s + s.transpose());
}

struct HEval {
  double h = 0.0;
  Vector grad;
};

// h(w) = lambda_max(-S(w)) = -lambda_min(S(w)); with u the bottom eigenvector
// of S, dh/dw_k = -u^T A_k u.
HEval eval_h(const std::vector<Matrix>& a, const Vector& w) {
  const Matrix s = combine(a, w);
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  if (es.info() != Eigen::Success) throw NumericError("subproblem eigensolver failed");
  const Vector u = es.eigenvectors().col(0);
  HEval out{-es.eigenvalues()[0], Vector(static_cast<Eigen::Index>(a.size()))};
  for (std::size_t k = 0; k < a.size(); ++k)
    out.grad[static_cast<Eigen::Index>(k)] = -u.dot(a[k] * u);
  return out;
}

void project_unit_ball(Vector& w) {
  const double n = w.norm();
  if (n > 1.0) w /= n;
}

struct Descent {
  Vector w;
  double h = 0.0;
  int iterations = 0;
  bool converged = false;
};

constexpr int kRandomStarts = 8;
constexpr int kDescents = 4;

// Projected subgradient descent with target-level Polyak steps; the target gap
// halves whenever progress stalls.
Descent level_descent(const std::vector<Matrix>& a, Vector w, double lip,
                      const SubsolverConfig& cfg) {
  constexpr int kPatience = 40;
  Descent out{w, eval_h(a, w).h};
  double delta = 0.5 * lip;
  double f_ref = out.h;
  int stall = 0;
  for (; out.iterations < cfg.max_iters; ++out.iterations) {
    const HEval ev = eval_h(a, w);
    if (ev.h < out.h) {
      out.h = ev.h;
      out.w = w;
    }
    if (out.h <= f_ref - 0.5 * delta) {
      f_ref = out.h;
      stall = 0;
    } else if (++stall > kPatience) {
      delta *= 0.5;
      f_ref = out.h;
      stall = 0;
      w = out.w;
      if (delta < cfg.tol_sub) {
        out.converged = true;
        break;
      }
      continue;
    }
    const double g2 = ev.grad.squaredNorm();
    if (g2 == 0.0) {
      out.converged = true;
      break;
    }
    w -= ((ev.h - (f_ref - delta)) / g2) * ev.grad;
    project_unit_ball(w);
  }
  return out;
}

}  // namespace

double min_eig_combination(const std::vector<Matrix>& a, const VectorRef& w) {
  if (a.size() != static_cast<std::size_t>(w.size()))
    throw std::invalid_argument("weight length does not match matrix count");
  if (a.front().rows() == 1) return combine(a, w)(0, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(combine(a, w), Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

SubproblemSolution solve(const std::vector<Matrix>& a, const SubsolverConfig& cfg) {
  validate(a);
  const auto s = static_cast<Eigen::Index>(a.size());

  double lip = 0.0;
  for (const Matrix& m : a) lip += m.squaredNorm();
  lip = std::sqrt(lip);

  SubproblemSolution sol;
  sol.w_star = Vector::Zero(s);
  if (lip == 0.0) return sol;

  // Starting points: the trace direction, +-e_k and a few fixed spread-out
  // directions. The level method runs from the most promising of them.
  std::vector<Vector> starts;
  Vector tr(s);
  for (Eigen::Index k = 0; k < s; ++k) tr[k] = a[static_cast<std::size_t>(k)].trace();
  if (tr.norm() > 0) starts.push_back(tr.normalized());
  for (Eigen::Index k = 0; k < s; ++k) {
    starts.push_back(Vector::Unit(s, k));
    starts.push_back(-Vector::Unit(s, k));
  }
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int r = 0; r < kRandomStarts; ++r) {
    Vector w(s);
    for (Eigen::Index k = 0; k < s; ++k) w[k] = gauss(rng);
    starts.push_back(w.normalized());
  }
  std::vector<std::pair<double, std::size_t>> ranked;
  for (std::size_t i = 0; i < starts.size(); ++i) ranked.emplace_back(eval_h(a, starts[i]).h, i);
  std::sort(ranked.begin(), ranked.end());

  Vector best = Vector::Zero(s);
  double f_best = 0.0;
  sol.converged = true;
  const std::size_t runs = std::min<std::size_t>(kDescents, ranked.size());
  for (std::size_t r = 0; r < runs; ++r) {
    const Descent d = level_descent(a, starts[ranked[r].second], lip, cfg);
    sol.iterations += d.iterations;
    if (d.h < f_best) {
      f_best = d.h;
      best = d.w;
      sol.converged = d.converged;
    }
  }

  if (f_best < 0.0) {
    sol.tight = true;
    sol.w_star = best / best.norm();
    sol.u_star = min_eig_combination(a, sol.w_star);
  } else {
    sol.w_star = best;
    sol.u_star = -f_best;
  }
  return sol;
}

SubproblemSolution brute_oracle(const std::vector<Matrix>& a, int grid_resolution) {
  validate(a);
  const auto s = static_cast<int>(a.size());
  if (s > 3) throw std::invalid_argument("brute_oracle supports s <= 3");
  if (grid_resolution < 4) throw std::invalid_argument("grid resolution must be >= 4");
  constexpr double pi = std::numbers::pi;

  SubproblemSolution sol;
  sol.tight = true;
  if (s == 1) {
    const double up = min_eig_combination(a, Vector::Constant(1, 1.0));
    const double dn = min_eig_combination(a, Vector::Constant(1, -1.0));
    sol.w_star = Vector::Constant(1, up >= dn ? 1.0 : -1.0);
    sol.u_star = std::max(up, dn);
    return sol;
  }

  // Sphere points from angles: s = 2 uses one angle, s = 3 uses (polar, azimuth).
  auto to_w = [s](double p, double q) {
    Vector w(s);
    if (s == 2) {
      w << std::cos(p), std::sin(p);
    } else {
      w << std::sin(p) * std::cos(q), std::sin(p) * std::sin(q), std::cos(p);
    }
    return w;
  };

  struct Cell {
    double u, p, q;
  };
  std::vector<Cell> cells;
  const double dp = (s == 2 ? 2.0 * pi : pi) / grid_resolution;
  const double dq = 2.0 * pi / grid_resolution;
  if (s == 2) {
    for (int i = 0; i < grid_resolution; ++i) {
      const double p = i * dp;
      cells.push_back({min_eig_combination(a, to_w(p, 0.0)), p, 0.0});
    }
  } else {
    for (int i = 0; i <= grid_resolution; ++i) {
      for (int j = 0; j < grid_resolution; ++j) {
        const double p = i * dp;
        const double q = j * dq;
        cells.push_back({min_eig_combination(a, to_w(p, q)), p, q});
      }
    }
  }
  const std::size_t keep = std::min<std::size_t>(8, cells.size());
  std::partial_sort(cells.begin(), cells.begin() + static_cast<std::ptrdiff_t>(keep), cells.end(),
                    [](const Cell& x, const Cell& y) { return x.u > y.u; });

  Cell best = cells.front();
  for (std::size_t c = 0; c < keep; ++c) {
    Cell cur = cells[c];
    double wp = dp;
    double wq = dq;
    for (int level = 0; level < 14; ++level) {
      constexpr int kSteps = 8;
      Cell next = cur;
      for (int i = -kSteps; i <= kSteps; ++i) {
        for (int j = (s == 2 ? 0 : -kSteps); j <= (s == 2 ? 0 : kSteps); ++j) {
          const double p = cur.p + wp * i / kSteps;
          const double q = cur.q + wq * j / kSteps;
          const double u = min_eig_combination(a, to_w(p, q));
          if (u > next.u) next = {u, p, q};
        }
      }
      cur = next;
      wp *= 0.35;
      wq *= 0.35;
    }
    if (cur.u > best.u) best = cur;
  }
  sol.w_star = to_w(best.p, best.q);
  sol.u_star = best.u;
  return sol;
}

std::vector<MatrixListCase> read_matrix_lists(std::istream& in) {
  std::stringstream clean;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first != std::string::npos && line[first] == '#') continue;
    clean << line << '\n';
  }

  std::vector<MatrixListCase> cases;
  int s = 0;
  int s1 = 0;
  while (clean >> s) {
    if (!(clean >> s1) || s < 1 || s1 < 1)
      throw std::invalid_argument("matrix list: bad header (expected 's s1')");
    MatrixListCase c;
    for (int k = 0; k < s; ++k) {
      Matrix m(s1, s1);
      for (int i = 0; i < s1; ++i)
        for (int j = 0; j < s1; ++j)
          if (!(clean >> m(i, j)))
            throw std::invalid_argument(
                fmt::format("matrix list: truncated matrix {} of case {}", k, cases.size()));
      c.matrices.push_back(std::move(m));
    }
    cases.push_back(std::move(c));
  }
  if (!clean.eof()) throw std::invalid_argument("matrix list: unexpected token");
  return cases;
}

void write_matrix_list(std::ostream& out, const std::vector<Matrix>& a) {
  if (a.empty()) throw std::invalid_argument("empty matrix list");
  out << a.size() << ' ' << a.front().rows() << '\n';
  for (const Matrix& m : a) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        out << (j ? " " : "") << fmt::format("{:.17g}", m(i, j));
      out << '\n';
    }
  }
}

}  // namespace wgfd
