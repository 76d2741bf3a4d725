#include "wgfd/pso.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

namespace wgfd {

namespace {

double fitness(const Matrix& design, const RegressionModel& model, const Criterion& crit) {
  const Matrix feats = model.feature_matrix(design);
  if (!feats.allFinite()) return -std::numeric_limits<double>::infinity();
  Matrix m = Matrix::Zero(feats.rows(), feats.rows());
  m.selfadjointView<Eigen::Lower>().rankUpdate(feats, 1.0 / static_cast<double>(design.cols()));
  m = m.selfadjointView<Eigen::Lower>();
  return criterion_value_fast(m, crit);
}

void project_design(Matrix& design, const DesignSpace& space) {
  for (Eigen::Index i = 0; i < design.cols(); ++i) space.project_in_place(design.col(i));
}

}  // namespace

FlowTrace pso_run(const RegressionModel& model, const DesignSpace& space, const Criterion& crit,
                  const PsoConfig& cfg) {
  if (cfg.swarm_size < 1 || cfg.n_points < 1 || cfg.max_iters < 0)
    throw std::invalid_argument("PSO needs swarm_size >= 1, n_points >= 1, max_iters >= 0");
  if (!(cfg.inertia > 0.0 && cfg.inertia < 1.0))
    throw std::invalid_argument("PSO inertia must lie in (0, 1)");
  if (!(cfg.cognitive > 0.0 && cfg.social > 0.0))
    throw std::invalid_argument("PSO acceleration coefficients must be positive");
  if (space.dim() != model.input_dim())
    throw std::invalid_argument("design space and model dimensions differ");

  const int d = space.dim();
  const int np = cfg.n_points;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  const double vmax = cfg.velocity_clamp * space.diameter();

  std::vector<Matrix> pos;
  std::vector<Matrix> vel;
  std::vector<Matrix> pbest;
  std::vector<double> pbest_val;
  pos.reserve(static_cast<std::size_t>(cfg.swarm_size));
  for (int p = 0; p < cfg.swarm_size; ++p) {
    pos.push_back(init_uniform(space, np, rng()).points());
    vel.push_back(Matrix::Zero(d, np));
    pbest.push_back(pos.back());
    pbest_val.push_back(fitness(pos.back(), model, crit));
  }
  auto gbest_idx = static_cast<std::size_t>(
      std::max_element(pbest_val.begin(), pbest_val.end()) - pbest_val.begin());
  Matrix gbest = pbest[gbest_idx];
  double gbest_val = pbest_val[gbest_idx];

  FlowTrace trace;
  trace.records.reserve(static_cast<std::size_t>(cfg.max_iters) + 1);
  auto rms_velocity = [&] {
    double acc = 0.0;
    for (const Matrix& v : vel) acc += v.squaredNorm();
    return std::sqrt(acc / (static_cast<double>(cfg.swarm_size) * np));
  };
  trace.records.push_back({0, gbest_val, rms_velocity(), cfg.inertia});

  Matrix r1(d, np);
  Matrix r2(d, np);
  for (int t = 1; t <= cfg.max_iters; ++t) {
    for (int p = 0; p < cfg.swarm_size; ++p) {
      const auto ip = static_cast<std::size_t>(p);
      for (Eigen::Index k = 0; k < r1.size(); ++k) {
        r1.data()[k] = unif(rng);
        r2.data()[k] = unif(rng);
      }
      Matrix& x = pos[ip];
      Matrix& v = vel[ip];
      v = cfg.inertia * v + cfg.cognitive * r1.cwiseProduct(pbest[ip] - x) +
          cfg.social * r2.cwiseProduct(gbest - x);
      v = v.cwiseMax(-vmax).cwiseMin(vmax);
      x += v;
      project_design(x, space);

      const double f = fitness(x, model, crit);
      if (f > pbest_val[ip]) {
        pbest_val[ip] = f;
        pbest[ip] = x;
      }
    }
    // Synchronous global-best update after the sweep.
    gbest_idx = static_cast<std::size_t>(
        std::max_element(pbest_val.begin(), pbest_val.end()) - pbest_val.begin());
    if (pbest_val[gbest_idx] > gbest_val) {
      gbest_val = pbest_val[gbest_idx];
      gbest = pbest[gbest_idx];
    }
    trace.records.push_back({t, gbest_val, rms_velocity(), cfg.inertia});
  }

  trace.final_measure = DesignMeasure(gbest);
  trace.termination = Termination::max_iters;
  return trace;
}

EnsembleSummary summarize(std::vector<double> finals) {
  if (finals.empty()) throw std::invalid_argument("cannot summarize zero runs");
  EnsembleSummary s;
  const auto n = static_cast<double>(finals.size());
  s.best = *std::max_element(finals.begin(), finals.end());
  s.worst = *std::min_element(finals.begin(), finals.end());
  s.mean = std::accumulate(finals.begin(), finals.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : finals) ss += (v - s.mean) * (v - s.mean);
  s.stdev = finals.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  s.finals = std::move(finals);
  return s;
}

EnsembleSummary pso_ensemble(const RegressionModel& model, const DesignSpace& space,
                             const Criterion& crit, const PsoConfig& cfg, int n_runs,
                             std::vector<FlowTrace>* traces) {
  if (n_runs < 1) throw std::invalid_argument("ensemble needs n_runs >= 1");
  std::vector<FlowTrace> runs(static_cast<std::size_t>(n_runs));

  // Runs are independent; each worker takes a strided slice so results land
  // at their seed index regardless of scheduling.
  const unsigned workers =
      std::clamp(std::thread::hardware_concurrency(), 1u, static_cast<unsigned>(n_runs));
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](unsigned w) {
    try {
      for (auto r = static_cast<std::size_t>(w); r < runs.size(); r += workers) {
        PsoConfig c = cfg;
        c.seed = cfg.seed + r;
        runs[r] = pso_run(model, space, crit, c);
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<double> finals;
  finals.reserve(runs.size());
  for (const FlowTrace& t : runs) finals.push_back(t.final_value());
  if (traces != nullptr) *traces = std::move(runs);
  return summarize(std::move(finals));
}

}  // namespace wgfd
