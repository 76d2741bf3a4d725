#pragma once

#include "wgfd/design.hpp"
#include "wgfd/esteep.hpp"
#include "wgfd/wgrad.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace wgfd {

enum class StepMode { fixed, backtracking };
enum class Termination { max_iters, stationary, infeasible };

std::string to_string(StepMode m);
std::string to_string(Termination t);
StepMode step_mode_from_string(const std::string& s);

struct FlowConfig {
  int n_particles = 100;
  int max_iters = 1000;
  /// Base step alpha.
  double step = 0.05;
  /// Step at iteration t is step / (1 + step_decay * t); 0 keeps it constant.
  double step_decay = 0.0;
  StepMode step_mode = StepMode::fixed;
  std::uint64_t seed = 1;
  /// Stationarity threshold on |g|_rho (smooth criteria) or u* (E).
  double stop_tol = 1e-6;
  bool project_each_step = true;
  /// Move along g / |g|_rho instead of g.
  bool unit_norm_step = false;
  Criterion criterion = Criterion::E();
  /// Multiplicity band, Gram-Schmidt rank tolerance and subsolver settings
  /// for the E criterion. Its stop_tol is overridden by the field above.
  EsteepConfig esteep;
};

struct TraceRecord {
  int iter = 0;
  double value = 0.0;
  /// |g|_rho for smooth criteria, u* for E (they coincide when lambda_min is simple).
  double dirnorm = 0.0;
  double step = 0.0;
};

struct FlowTrace {
  std::vector<TraceRecord> records;
  DesignMeasure final_measure{Matrix::Zero(1, 1)};
  Termination termination = Termination::max_iters;
  /// Fresh initializations drawn because the starting design was singular.
  int restarts = 0;
  std::string diagnostic;

  double final_value() const { return records.back().value; }
};

/// i.i.d. uniform particles over the space; deterministic in the seed.
/// Box: componentwise uniform. Ball: uniform direction, radius r * U^{1/d}.
DesignMeasure init_uniform(const DesignSpace& space, int n, std::uint64_t seed);

/// Ascent direction for the maximized criterion at the current measure.
struct FlowDirection {
  Matrix field;
  double dirnorm = 0.0;
  bool stationary = false;
  /// Eigenvalue band size (E only; 0 otherwise).
  int s1 = 0;
};

FlowDirection flow_direction(const DesignMeasure& measure, const RegressionModel& model,
                             const InfoMatrix& info, const FlowConfig& cfg);

/// Halves alpha0 up to 20 times until the (projected) move does not lower the
/// criterion by more than 1e-12. Returns 0 when every trial fails.
double backtrack_step(const DesignMeasure& measure, const Matrix& field, double alpha0,
                      const RegressionModel& model, const Criterion& crit,
                      const DesignSpace* space = nullptr);

/// Particle Wasserstein gradient flow (ascent convention). Throws
/// InfeasibleError if no nonsingular start is found for an inverse-based
/// criterion, std::invalid_argument on a bad configuration.
FlowTrace run(const RegressionModel& model, const DesignSpace& space, const FlowConfig& cfg,
              std::optional<DesignMeasure> measure0 = std::nullopt);

/// "iter,value,dirnorm,step" CSV.
void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& records);
std::vector<TraceRecord> read_trace_csv(std::istream& in);
/// "x_1,...,x_d" CSV, one particle per row.
void write_design_csv(std::ostream& out, const DesignMeasure& measure);
DesignMeasure read_design_csv(std::istream& in);

}  // namespace wgfd
