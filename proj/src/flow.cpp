#include "wgfd/flow.hpp"

#include "wgfd/errors.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

namespace wgfd {

namespace {

constexpr int kMaxRestarts = 10;

void move_particles(Matrix& points, const Matrix& field, double alpha, const DesignSpace* space) {
  points.noalias() += alpha * field;
  if (space == nullptr) return;
  for (Eigen::Index i = 0; i < points.cols(); ++i) space->project_in_place(points.col(i));
}

bool usable_start(const DesignMeasure& measure, const RegressionModel& model,
                  const Criterion& crit) {
  if (!crit.needs_inverse()) return true;
  return !info_matrix(measure, model).is_singular();
}

}  // namespace

std::string to_string(StepMode m) { return m == StepMode::fixed ? "fixed" : "backtracking"; }

std::string to_string(Termination t) {
  switch (t) {
    case Termination::max_iters: return "max_iters";
    case Termination::stationary: return "stationary";
    case Termination::infeasible: return "infeasible";
  }
  return "?";
}

StepMode step_mode_from_string(const std::string& s) {
  if (s == "fixed") return StepMode::fixed;
  if (s == "backtracking") return StepMode::backtracking;
  throw std::invalid_argument("unknown step mode '" + s + "' (expected fixed|backtracking)");
}

DesignMeasure init_uniform(const DesignSpace& space, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("need at least one particle");
  const int d = space.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix pts(d, n);

  if (const auto* box = std::get_if<Box>(&space.shape())) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < d; ++j)
        pts(j, i) = box->lower[j] + (box->upper[j] - box->lower[j]) * unif(rng);
  } else {
    const auto& ball = std::get<Ball>(space.shape());
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
      Vector dir(d);
      do {
        for (int j = 0; j < d; ++j) dir[j] = gauss(rng);
      } while (dir.norm() == 0.0);
      const double r = ball.radius * std::pow(unif(rng), 1.0 / d);
      pts.col(i) = dir.normalized() * r;
    }
  }
  return DesignMeasure(std::move(pts));
}

FlowDirection flow_direction(const DesignMeasure& measure, const RegressionModel& model,
                             const InfoMatrix& info, const FlowConfig& cfg) {
  FlowDirection out;
  if (cfg.criterion.kind() != CriterionKind::E) {
    GradientField g = ascent_field(measure, model, info, cfg.criterion);
    out.dirnorm = g.norm_rho();
    out.field = std::move(g.vectors);
    out.stationary = out.dirnorm <= cfg.stop_tol;
    return out;
  }

  const EigenSubspace sub = multiplicity(info, cfg.esteep.tol_mult);
  out.s1 = sub.s1;
  if (sub.s1 == 1) {
    GradientField g = grad_E_simple(measure, model, info, cfg.esteep.tol_mult);
    out.dirnorm = g.norm_rho();
    out.field = std::move(g.vectors);
    out.stationary = out.dirnorm <= cfg.stop_tol;
    return out;
  }

  EsteepConfig ecfg = cfg.esteep;
  ecfg.stop_tol = cfg.stop_tol;
  AscentDirection dir = steepest_direction(measure, model, info, ecfg);
  out.dirnorm = dir.u_star;
  out.field = std::move(dir.velocity);
  out.stationary = dir.stop;
  return out;
}

double backtrack_step(const DesignMeasure& measure, const Matrix& field, double alpha0,
                      const RegressionModel& model, const Criterion& crit,
                      const DesignSpace* space) {
  const double base = criterion_value(measure, model, crit);
  double alpha = alpha0;
  for (int attempt = 0; attempt <= 20; ++attempt, alpha *= 0.5) {
    Matrix pts = measure.points();
    move_particles(pts, field, alpha, space);
    if (!pts.allFinite()) continue;
    const double v = criterion_value(DesignMeasure(std::move(pts)), model, crit);
    if (v >= base - 1e-12) return alpha;
  }
  return 0.0;
}

FlowTrace run(const RegressionModel& model, const DesignSpace& space, const FlowConfig& cfg,
              std::optional<DesignMeasure> measure0) {
  if (space.dim() != model.input_dim())
    throw std::invalid_argument("design space and model dimensions differ");
  if (!(cfg.step >= 0.0)) throw std::invalid_argument("step must be non-negative");
  if (cfg.max_iters < 0) throw std::invalid_argument("max_iters must be non-negative");
  if (!(cfg.step_decay >= 0.0)) throw std::invalid_argument("step_decay must be non-negative");

  FlowTrace trace;
  DesignMeasure measure = [&] {
    if (measure0) {
      if (measure0->dim() != space.dim())
        throw std::invalid_argument("initial design has the wrong dimension");
      if (!usable_start(*measure0, model, cfg.criterion))
        throw InfeasibleError("initial design has a singular information matrix");
      return *measure0;
    }
    for (int attempt = 0; attempt <= kMaxRestarts; ++attempt) {
      DesignMeasure m = init_uniform(space, cfg.n_particles, cfg.seed + attempt);
      if (usable_start(m, model, cfg.criterion)) return m;
      ++trace.restarts;
    }
    throw InfeasibleError(fmt::format(
        "no nonsingular start after {} draws of {} particles for a {}-parameter model",
        kMaxRestarts + 1, cfg.n_particles, model.feature_dim()));
  }();

  const DesignSpace* proj = cfg.project_each_step ? &space : nullptr;
  trace.records.reserve(static_cast<std::size_t>(cfg.max_iters) + 1);

  for (int t = 0;; ++t) {
    const InfoMatrix info = info_matrix(measure, model);
    const double value = criterion_value(info, cfg.criterion);
    if (!std::isfinite(value)) {
      trace.records.push_back({t, value, 0.0, 0.0});
      trace.termination = Termination::infeasible;
      trace.diagnostic = fmt::format("information matrix became singular at iteration {}", t);
      break;
    }
    const FlowDirection dir = flow_direction(measure, model, info, cfg);
    if (t == cfg.max_iters || dir.stationary) {
      trace.records.push_back({t, value, dir.dirnorm, 0.0});
      trace.termination = dir.stationary ? Termination::stationary : Termination::max_iters;
      break;
    }

    Matrix field = dir.field;
    if (cfg.unit_norm_step) {
      const double nrm = std::sqrt(field.squaredNorm() / measure.size());
      if (nrm > 0) field /= nrm;
    }
    double alpha = cfg.step / (1.0 + cfg.step_decay * t);
    if (cfg.step_mode == StepMode::backtracking && alpha > 0.0)
      alpha = backtrack_step(measure, field, alpha, model, cfg.criterion, proj);

    trace.records.push_back({t, value, dir.dirnorm, alpha});
    if (alpha != 0.0) move_particles(measure.mutable_points(), field, alpha, proj);
  }

  trace.final_measure = std::move(measure);
  return trace;
}

}  // namespace wgfd
