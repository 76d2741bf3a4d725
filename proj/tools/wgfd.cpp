// wgfd: optimal experimental designs by particle Wasserstein gradient flow.

#include "wgfd/bench.hpp"
#include "wgfd/errors.hpp"
#include "wgfd/oracle.hpp"
#include "wgfd/plot.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"

namespace fs = std::filesystem;
using namespace wgfd;

namespace {

struct Options {
  std::string experiment;
  std::string model = "so";
  int k = 2;
  std::string space = "cube";
  std::string bounds;
  std::string criterion = "E";
  std::string cvec;
  std::string lweight_diag;
  std::string glm_weight = "auto";
  std::string engine;
  int particles = 100;
  int iters = 1000;
  double step = 0.05;
  double decay = 0.0;
  std::string step_mode = "fixed";
  double tol_mult = 1e-6;
  std::uint64_t seed = 1;
  int runs = 100;
  int swarm = 100;
  std::string out = "out";
  // plot
  std::vector<std::string> inputs;
  bool mean = false;
  int smooth = 1;
  std::string title;
  // oracle-tests
  std::string matrix_file;
  double tol = 1e-3;
};

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double x = std::stod(item, &used);
    if (item.find_first_not_of(" \t", used) != std::string::npos)
      throw std::invalid_argument("bad number '" + item + "'");
    v.push_back(x);
  }
  return v;
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Criterion make_criterion(const Options& o, int m) {
  switch (criterion_kind_from_string(o.criterion)) {
    case CriterionKind::E: return Criterion::E();
    case CriterionKind::D: return Criterion::D();
    case CriterionKind::A: return Criterion::A();
    case CriterionKind::c: {
      Vector c = o.cvec.empty() ? Vector::Ones(m) : to_vector(parse_list(o.cvec));
      if (c.size() != m) throw std::invalid_argument(fmt::format("--cvec needs {} entries", m));
      return Criterion::c(std::move(c));
    }
    case CriterionKind::L: {
      if (o.lweight_diag.empty()) return Criterion::L(Matrix::Identity(m, m));
      const Vector d = to_vector(parse_list(o.lweight_diag));
      if (d.size() != m) throw std::invalid_argument(fmt::format("--lweight-diag needs {} entries", m));
      return Criterion::L(d.asDiagonal().toDenseMatrix());
    }
  }
  throw std::logic_error("unreachable");
}

bool given(const CLI::App& app, const std::string& name) { return app.count(name) > 0; }

// Experiment described by the flags. A matching registry row supplies the
// tuned step schedule and reference value; explicit flags override it.
ExperimentSpec resolve_spec(const CLI::App& app, const Options& o) {
  ExperimentSpec spec;
  bool from_registry = false;
  if (!o.experiment.empty()) {
    spec = find_experiment(o.experiment);
    from_registry = true;
  } else if (!given(app, "--bounds") && !given(app, "--cvec") && !given(app, "--lweight-diag")) {
    for (const ExperimentSpec& e : registry()) {
      const bool same_model =
          e.model.family == o.model && (o.model == "logistic" || e.model.k == o.k);
      if (same_model && e.space.ball == (o.space == "ball") &&
          e.wgf.criterion.name() == o.criterion) {
        spec = e;
        from_registry = true;
        break;
      }
    }
  }

  if (!from_registry) {
    if (o.model != "so" && o.model != "logistic")
      throw std::invalid_argument("--model must be so or logistic");
    if (o.space != "cube" && o.space != "ball")
      throw std::invalid_argument("--space must be cube or ball");
    spec.model.family = o.model;
    spec.model.k = o.k;
    if (o.model == "logistic") spec.model.theta_star = logistic_benchmark_theta();
    spec.space.ball = o.space == "ball";
    const double half = o.model == "logistic" ? 3.0 : 1.0;
    spec.space.lo = -half;
    spec.space.hi = half;
    spec.space.radius = half;
    spec.wgf.step = o.model == "so" && o.k >= 5 ? 0.02 : 0.05;
    spec.name = fmt::format("{}-{}{}-{}", o.criterion, o.model,
                            o.model == "so" ? std::to_string(o.k) : std::string(), o.space);
  }

  if (given(app, "--bounds")) {
    const std::vector<double> b = parse_list(o.bounds);
    if (spec.space.ball) {
      if (b.size() != 1) throw std::invalid_argument("--bounds for a ball is the radius R");
      spec.space.radius = b[0];
    } else if (b.size() == 1) {
      spec.space.lo = -b[0];
      spec.space.hi = b[0];
    } else if (b.size() == 2) {
      spec.space.lo = b[0];
      spec.space.hi = b[1];
    } else {
      throw std::invalid_argument("--bounds for a cube is LO,HI or a half-width");
    }
  }
  if (spec.model.family == "logistic" && o.glm_weight != "auto")
    spec.model.weight = glm_weight_from_string(o.glm_weight);

  const int m = build_model(spec.model).feature_dim();
  if (!from_registry || given(app, "--criterion") || given(app, "--cvec") ||
      given(app, "--lweight-diag"))
    spec.wgf.criterion = make_criterion(o, m);

  if (given(app, "--particles")) {
    spec.wgf.n_particles = o.particles;
    spec.pso.n_points = o.particles;
  }
  if (given(app, "--iters")) {
    spec.wgf.max_iters = o.iters;
    spec.pso.max_iters = o.iters;
  }
  if (given(app, "--step")) spec.wgf.step = o.step;
  if (given(app, "--decay")) spec.wgf.step_decay = o.decay;
  if (given(app, "--step-mode")) spec.wgf.step_mode = step_mode_from_string(o.step_mode);
  if (given(app, "--tol-mult")) spec.wgf.esteep.tol_mult = o.tol_mult;
  if (given(app, "--seed")) {
    spec.wgf.seed = o.seed;
    spec.pso.seed = o.seed;
  }
  if (given(app, "--runs")) spec.pso_runs = o.runs;
  if (given(app, "--swarm")) spec.pso.swarm_size = o.swarm;
  return spec;
}

std::string format_value(std::optional<double> v) {
  return v ? fmt::format("{:.6g}", *v) : std::string("-");
}

int cmd_run(const CLI::App& app, const Options& o) {
  ExperimentSpec spec = resolve_spec(app, o);
  const Engine engine = o.engine.empty() ? Engine::wgf : engine_from_string(o.engine);
  const fs::path dir = fs::path(o.out) / spec.name;

  std::optional<WgfOutcome> wgf;
  std::optional<PsoOutcome> pso;
  if (engine != Engine::pso) {
    wgf = run_wgf(spec);
    write_wgf_artifacts(dir.string(), *wgf);
    std::cout << wgf->summary.to_json();
  }
  if (engine != Engine::wgf) {
    pso = run_pso(spec);
    write_pso_artifacts(dir.string(), *pso);
    std::cout << pso->summary.to_json();
  }
  if (wgf && pso)
    write_comparison_plot((dir / "convergence.svg").string(), spec.name, &*wgf, &*pso);
  return 0;
}

int cmd_pso_ensemble(const CLI::App& app, const Options& o) {
  const ExperimentSpec spec = resolve_spec(app, o);
  const fs::path dir = fs::path(o.out) / spec.name;
  const PsoOutcome pso = run_pso(spec);
  write_pso_artifacts(dir.string(), pso);
  const EnsembleSummary& e = *pso.summary.ensemble;
  fmt::print("{}: {} runs x {} iterations\n", spec.name, e.finals.size(), spec.pso.max_iters);
  fmt::print("  best {:.6g}  mean {:.6g}  worst {:.6g}  stdev {:.4g}  ({:.1f} s)\n", e.best,
             e.mean, e.worst, e.stdev, pso.summary.wall_time_ms / 1000.0);
  return 0;
}

int cmd_bench(const CLI::App& app, const Options& o) {
  const Engine engine = o.engine.empty() ? Engine::wgf : engine_from_string(o.engine);
  fs::create_directories(o.out);
  std::string all = "[\n";
  fmt::print("{:<18} {:<6} {:>12} {:>10} {:>10} {:>10}  {}\n", "experiment", "engine", "final",
             "reference", "gap", "time_s", "termination");
  bool first = true;
  auto report = [&](const RunSummary& s) {
    fmt::print("{:<18} {:<6} {:>12.6g} {:>10} {:>10} {:>10.2f}  {}\n", s.experiment, s.engine,
               s.final_value, format_value(s.reference_value), format_value(s.gap()),
               s.wall_time_ms / 1000.0, s.termination);
    std::string js = s.to_json();
    js.pop_back();
    all += (first ? "" : ",\n") + js;
    first = false;
  };

  for (ExperimentSpec spec : registry()) {
    if (given(app, "--seed")) {
      spec.wgf.seed = o.seed;
      spec.pso.seed = o.seed;
    }
    if (given(app, "--runs")) spec.pso_runs = o.runs;
    const fs::path dir = fs::path(o.out) / spec.name;
    std::optional<WgfOutcome> wgf;
    std::optional<PsoOutcome> pso;
    if (engine != Engine::pso) {
      wgf = run_wgf(spec);
      write_wgf_artifacts(dir.string(), *wgf);
      report(wgf->summary);
    }
    if (engine != Engine::wgf) {
      pso = run_pso(spec);
      write_pso_artifacts(dir.string(), *pso);
      report(pso->summary);
    }
    if (wgf && pso)
      write_comparison_plot((dir / "convergence.svg").string(), spec.name, &*wgf, &*pso);
  }
  all += "\n]\n";
  std::ofstream(fs::path(o.out) / "bench_summary.json") << all;
  return 0;
}

int cmd_oracle_tests(const CLI::App& app, const Options& o) {
  std::vector<OracleCase> cases;
  if (!o.matrix_file.empty()) {
    std::ifstream in(o.matrix_file);
    if (!in) throw std::runtime_error("cannot open " + o.matrix_file);
    for (MatrixListCase& c : read_matrix_lists(in)) cases.push_back({std::move(c.matrices), "file"});
  } else {
    cases = make_oracle_cases(given(app, "--runs") ? o.runs : 200, o.seed);
  }
  const OracleReport rep = run_oracle_suite(cases, o.tol);
  for (std::size_t i = 0; i < rep.results.size(); ++i) {
    const OracleResult& r = rep.results[i];
    if (!r.pass)
      fmt::print("FAIL case {} ({}, s={}, s1={}): solve {:.6g} oracle {:.6g} diff {:.3g}\n", i,
                 r.kind, r.s, r.s1, r.u_solve, r.u_oracle, r.diff);
  }
  fmt::print("{} cases, {} failures, max |du*| = {:.3g} (tolerance {:g})\n", rep.results.size(),
             rep.failures, rep.max_diff, o.tol);
  return rep.failures == 0 ? 0 : 1;
}

int cmd_plot(const Options& o) {
  std::vector<std::vector<TraceRecord>> traces;
  for (const std::string& path : o.inputs) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    traces.push_back(read_trace_csv(in));
    if (traces.back().empty()) throw std::invalid_argument(path + " holds an empty trace");
  }
  std::vector<Series> series;
  if (o.mean) {
    series.push_back(mean_series(traces, fmt::format("mean of {}", traces.size())));
  } else {
    for (std::size_t i = 0; i < traces.size(); ++i)
      series.push_back(trace_series(traces[i], fs::path(o.inputs[i]).stem().string()));
  }
  if (o.smooth > 1)
    for (Series& s : series) s = block_average(s, o.smooth);
  PlotOptions opts;
  opts.title = o.title;
  std::string path = o.out;
  if (fs::path(path).extension() != ".svg") path += ".svg";
  if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
  write_svg_file(path, series, opts);
  fmt::print("wrote {}\n", path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous optimal designs by particle Wasserstein gradient flow"};
  app.set_config("--config", "", "TOML file with option values; command-line flags win");
  app.require_subcommand(1);
  app.fallthrough();
  Options o;

  app.add_option("--experiment", o.experiment, "Registry row to start from");
  app.add_option("--model", o.model, "Regression model")->check(CLI::IsMember({"so", "logistic"}));
  app.add_option("--k", o.k, "Inputs of the second-order model")->check(CLI::Range(1, 64));
  app.add_option("--space", o.space, "Design region")->check(CLI::IsMember({"cube", "ball"}));
  app.add_option("--bounds", o.bounds, "Cube LO,HI (or half-width) / ball radius");
  app.add_option("--criterion", o.criterion, "Optimality criterion")
      ->check(CLI::IsMember({"E", "D", "A", "c", "L"}));
  app.add_option("--cvec", o.cvec, "c-criterion vector, comma separated (default all ones)");
  app.add_option("--lweight-diag", o.lweight_diag, "Diagonal of the L weight (default identity)");
  app.add_option("--glm-weight", o.glm_weight, "Logistic weight convention")
      ->check(CLI::IsMember({"auto", "paper", "fisher"}));
  app.add_option("--engine", o.engine, "wgf, pso or both")
      ->check(CLI::IsMember({"wgf", "pso", "both"}));
  app.add_option("--particles", o.particles, "Particles N (design points per PSO member)")
      ->check(CLI::PositiveNumber);
  app.add_option("--iters", o.iters, "Iterations")->check(CLI::NonNegativeNumber);
  app.add_option("--step", o.step, "Base step size")->check(CLI::NonNegativeNumber);
  app.add_option("--decay", o.decay, "Step at t is step / (1 + decay t)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--step-mode", o.step_mode, "fixed or backtracking")
      ->check(CLI::IsMember({"fixed", "backtracking"}));
  app.add_option("--tol-mult", o.tol_mult, "Eigenvalue multiplicity band (E)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--seed", o.seed, "Base RNG seed");
  app.add_option("--runs", o.runs, "PSO runs / oracle cases")->check(CLI::PositiveNumber);
  app.add_option("--swarm", o.swarm, "PSO swarm size")->check(CLI::PositiveNumber);
  app.add_option("--out", o.out, "Output directory (plot: output file)");

  CLI::App* run = app.add_subcommand("run", "Run one experiment");
  CLI::App* bench = app.add_subcommand("bench", "Run every registry row");
  CLI::App* ens = app.add_subcommand("pso-ensemble", "Repeated PSO runs with summary statistics");
  CLI::App* oracle = app.add_subcommand("oracle-tests", "Check the subproblem solver against grid search");
  oracle->add_option("--input", o.matrix_file, "Matrix list file instead of random cases")
      ->check(CLI::ExistingFile);
  oracle->add_option("--tol", o.tol, "Allowed |du*|");
  CLI::App* plot = app.add_subcommand("plot", "Convergence plot from trace CSV files");
  plot->add_option("traces", o.inputs, "Trace CSV files")->required()->check(CLI::ExistingFile);
  plot->add_flag("--mean", o.mean, "Plot the per-iteration mean of all traces");
  plot->add_option("--smooth", o.smooth, "Average blocks of this many iterations")
      ->check(CLI::PositiveNumber);
  plot->add_option("--title", o.title, "Plot title");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run) return cmd_run(app, o);
    if (*bench) return cmd_bench(app, o);
    if (*ens) return cmd_pso_ensemble(app, o);
    if (*oracle) return cmd_oracle_tests(app, o);
    if (*plot) return cmd_plot(o);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
