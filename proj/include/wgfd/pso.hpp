#pragma once

#include "wgfd/design.hpp"
#include "wgfd/flow.hpp"

#include <cstdint>
#include <vector>

namespace wgfd {

/// Global-best particle swarm over whole designs: each swarm member is a
/// uniform-weight design of n_points points.
struct PsoConfig {
  int swarm_size = 100;
  int n_points = 100;
  int max_iters = 1000;
  double inertia = 0.7298;
  double cognitive = 1.49618;
  double social = 1.49618;
  std::uint64_t seed = 1;
  /// Velocity bound per coordinate, as a fraction of the space diameter.
  double velocity_clamp = 0.5;
};

/// Runs the swarm. The trace records the global-best fitness per iteration
/// (dirnorm = RMS swarm velocity, step = inertia); final_measure is the
/// global-best design.
FlowTrace pso_run(const RegressionModel& model, const DesignSpace& space, const Criterion& crit,
                  const PsoConfig& cfg);

struct EnsembleSummary {
  double best = 0.0;
  double mean = 0.0;
  double worst = 0.0;
  /// Sample standard deviation (n - 1); 0 for a single run.
  double stdev = 0.0;
  std::vector<double> finals;
};

EnsembleSummary summarize(std::vector<double> finals);

/// pso_run with seeds seed, seed + 1, ..., seed + n_runs - 1. When traces is
/// non-null it receives every run's trace in seed order.
EnsembleSummary pso_ensemble(const RegressionModel& model, const DesignSpace& space,
                             const Criterion& crit, const PsoConfig& cfg, int n_runs,
                             std::vector<FlowTrace>* traces = nullptr);

}  // namespace wgfd
