#pragma once

#include "wgfd/flow.hpp"
#include "wgfd/pso.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wgfd {

enum class Engine { wgf, pso, both };
std::string to_string(Engine e);
Engine engine_from_string(const std::string& s);

struct ModelSpec {
  /// "so" or "logistic".
  std::string family = "so";
  /// Input count of the second-order surface.
  int k = 2;
  Vector theta_star;
  /// Logistic only; empty means try both conventions and keep the one whose
  /// final value lands closest to the reference.
  std::optional<GlmWeight> weight;
};

struct SpaceSpec {
  bool ball = false;
  /// Cube bounds, applied to every coordinate.
  double lo = -1.0;
  double hi = 1.0;
  double radius = 1.0;
};

struct ExperimentSpec {
  std::string name;
  ModelSpec model;
  SpaceSpec space;
  Engine engine = Engine::both;
  /// Criterion, step schedule and particle count for the gradient flow.
  FlowConfig wgf;
  PsoConfig pso;
  int pso_runs = 100;
  std::optional<double> reference_value;
  std::string reference_source;
};

/// Nominal parameter of the seven-input logistic benchmark.
Vector logistic_benchmark_theta();

/// The benchmark rows, in table order.
const std::vector<ExperimentSpec>& registry();
/// Throws std::invalid_argument for an unknown name.
const ExperimentSpec& find_experiment(const std::string& name);

RegressionModel build_model(const ModelSpec& spec, GlmWeight fallback = GlmWeight::paper);
DesignSpace build_space(const SpaceSpec& spec, int dim);

struct RunSummary {
  std::string experiment;
  std::string engine;
  std::string criterion;
  /// In the table orientation: trace-type criteria flip sign back.
  double final_value = 0.0;
  std::optional<double> reference_value;
  double wall_time_ms = 0.0;
  std::string termination;
  std::string model;
  std::string space;
  std::uint64_t seed = 1;
  int iterations = 0;
  /// Logistic only.
  std::optional<std::string> glm_weight;
  /// Final value under each weight convention that was tried.
  std::vector<std::pair<std::string, double>> weight_trials;
  /// PSO only.
  std::optional<EnsembleSummary> ensemble;

  /// |final_value - reference_value|, when there is a reference.
  std::optional<double> gap() const;
  std::string to_json() const;
};

struct WgfOutcome {
  FlowTrace trace;
  RunSummary summary;
};

struct PsoOutcome {
  std::vector<FlowTrace> traces;
  EnsembleSummary ensemble;
  RunSummary summary;
};

WgfOutcome run_wgf(const ExperimentSpec& spec);
PsoOutcome run_pso(const ExperimentSpec& spec);

/// Writes trace, design and summary files plus a convergence plot under
/// out_dir (created if missing). PSO traces go to out_dir/pso/.
void write_wgf_artifacts(const std::string& out_dir, const WgfOutcome& outcome);
void write_pso_artifacts(const std::string& out_dir, const PsoOutcome& outcome);
/// WGF trace and mean PSO trace on one set of axes.
void write_comparison_plot(const std::string& path, const std::string& title,
                           const WgfOutcome* wgf, const PsoOutcome* pso, int smooth_window = 1);

}  // namespace wgfd
