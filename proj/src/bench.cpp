#include "wgfd/bench.hpp"

#include "wgfd/plot.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "json.hpp"

namespace wgfd {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

ExperimentSpec so_row(std::string name, int k, bool ball, Criterion crit, double step,
                      double decay, int iters, int pso_iters, double ref, std::string source) {
  ExperimentSpec e;
  e.name = std::move(name);
  e.model.family = "so";
  e.model.k = k;
  e.space.ball = ball;
  e.wgf.criterion = std::move(crit);
  e.wgf.step = step;
  e.wgf.step_decay = decay;
  e.wgf.max_iters = iters;
  e.pso.max_iters = pso_iters;
  e.reference_value = ref;
  e.reference_source = std::move(source);
  return e;
}

std::vector<ExperimentSpec> make_registry() {
  std::vector<ExperimentSpec> rows;
  rows.push_back(so_row("D-so5-cube", 5, false, Criterion::D(), 0.05, 0.0, 1000, 1000, -14.27,
                        "theoretical log-det optimum, full quadratic model, [-1,1]^5"));
  rows.push_back(so_row("D-so5-ball", 5, true, Criterion::D(), 0.02, 0.0, 100, 100, -60.68,
                        "theoretical log-det optimum, full quadratic model, unit 5-ball"));
  rows.push_back(so_row("E-so2-cube", 2, false, Criterion::E(), 0.05, 0.005, 1000, 1000, 0.2000,
                        "known E-optimal value, full quadratic model, [-1,1]^2"));
  rows.push_back(so_row("E-so2-ball", 2, true, Criterion::E(), 0.05, 0.005, 1000, 100, 0.1000,
                        "known E-optimal value, full quadratic model, unit disc"));
  rows.push_back(so_row("E-so5-ball", 5, true, Criterion::E(), 0.05, 0.002, 5000, 100, 0.0270,
                        "known E-optimal value, full quadratic model, unit 5-ball"));
  rows.push_back(so_row("E-so5-cube", 5, false, Criterion::E(), 0.05, 0.002, 5000, 1000, 0.2000,
                        "known E-optimal value, full quadratic model, [-1,1]^5"));

  ExperimentSpec lg;
  lg.name = "E-logistic7-cube";
  lg.model.family = "logistic";
  lg.model.theta_star = logistic_benchmark_theta();
  lg.model.k = 7;
  lg.space.lo = -3.0;
  lg.space.hi = 3.0;
  lg.wgf.criterion = Criterion::E();
  lg.wgf.step = 0.1;
  lg.wgf.step_decay = 0.002;
  lg.wgf.max_iters = 2000;
  lg.pso.max_iters = 1000;
  lg.reference_value = 0.1540;
  lg.reference_source = "known locally E-optimal value, 7-input logistic model, [-3,3]^7";
  rows.push_back(std::move(lg));
  return rows;
}

nlohmann::json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

std::string to_string(Engine e) {
  switch (e) {
    case Engine::wgf: return "wgf";
    case Engine::pso: return "pso";
    case Engine::both: return "both";
  }
  return "?";
}

Engine engine_from_string(const std::string& s) {
  if (s == "wgf") return Engine::wgf;
  if (s == "pso") return Engine::pso;
  if (s == "both") return Engine::both;
  throw std::invalid_argument("unknown engine '" + s + "' (expected wgf|pso|both)");
}

Vector logistic_benchmark_theta() {
  Vector t(8);
  t << -0.4926, -0.6280, -0.3283, 0.4378, 0.5283, -0.6120, -0.6837, -0.2061;
  return t;
}

const std::vector<ExperimentSpec>& registry() {
  static const std::vector<ExperimentSpec> rows = make_registry();
  return rows;
}

const ExperimentSpec& find_experiment(const std::string& name) {
  for (const ExperimentSpec& e : registry())
    if (e.name == name) return e;
  std::string known;
  for (const ExperimentSpec& e : registry()) known += (known.empty() ? "" : ", ") + e.name;
  throw std::invalid_argument("unknown experiment '" + name + "' (known: " + known + ")");
}

RegressionModel build_model(const ModelSpec& spec, GlmWeight fallback) {
  if (spec.family == "so") return RegressionModel::second_order(spec.k);
  if (spec.family == "logistic") {
    Vector theta = spec.theta_star.size() > 0 ? spec.theta_star : logistic_benchmark_theta();
    return RegressionModel::logistic(std::move(theta), spec.weight.value_or(fallback));
  }
  throw std::invalid_argument("unknown model family '" + spec.family + "' (expected so|logistic)");
}

DesignSpace build_space(const SpaceSpec& spec, int dim) {
  return spec.ball ? DesignSpace::ball(dim, spec.radius) : DesignSpace::cube(dim, spec.lo, spec.hi);
}

std::optional<double> RunSummary::gap() const {
  if (!reference_value) return std::nullopt;
  return std::abs(final_value - *reference_value);
}

std::string RunSummary::to_json() const {
  nlohmann::ordered_json j;
  j["experiment"] = experiment;
  j["engine"] = engine;
  j["final_value"] = number_or_null(final_value);
  j["reference_value"] = reference_value ? nlohmann::ordered_json(*reference_value) : nullptr;
  const auto g = gap();
  j["gap"] = g ? number_or_null(*g) : nullptr;
  j["wall_time_ms"] = wall_time_ms;
  j["termination"] = termination;
  j["criterion"] = criterion;
  j["model"] = model;
  j["space"] = space;
  j["seed"] = seed;
  j["iterations"] = iterations;
  if (glm_weight) j["glm_weight"] = *glm_weight;
  if (!weight_trials.empty()) {
    nlohmann::ordered_json trials;
    for (const auto& [w, v] : weight_trials) trials[w] = number_or_null(v);
    j["glm_weight_trials"] = trials;
  }
  if (ensemble) {
    j["runs"] = ensemble->finals.size();
    j["best"] = number_or_null(ensemble->best);
    j["mean"] = number_or_null(ensemble->mean);
    j["worst"] = number_or_null(ensemble->worst);
    j["stdev"] = number_or_null(ensemble->stdev);
  }
  return j.dump(2) + "\n";
}

WgfOutcome run_wgf(const ExperimentSpec& spec) {
  const auto t0 = Clock::now();
  const Criterion& crit = spec.wgf.criterion;

  std::vector<GlmWeight> candidates;
  if (spec.model.family == "logistic" && !spec.model.weight)
    candidates = {GlmWeight::paper, GlmWeight::fisher};
  else
    candidates = {spec.model.weight.value_or(GlmWeight::paper)};

  WgfOutcome best;
  bool have = false;
  double best_score = 0.0;
  RunSummary& sum = best.summary;
  std::vector<std::pair<std::string, double>> trials;
  for (GlmWeight w : candidates) {
    const RegressionModel model = build_model(spec.model, w);
    const DesignSpace space = build_space(spec.space, model.input_dim());
    FlowTrace trace = run(model, space, spec.wgf);
    const double value = reported_value(crit, trace.final_value());
    trials.emplace_back(to_string(w), value);

    // Closest to the reference wins; without one, the better criterion value.
    double score = 0.0;
    if (spec.reference_value)
      score = std::isfinite(value) ? -std::abs(value - *spec.reference_value)
                                   : -std::numeric_limits<double>::infinity();
    else
      score = trace.final_value();
    if (!have || score > best_score) {
      have = true;
      best_score = score;
      best.trace = std::move(trace);
      sum.final_value = value;
      sum.model = model.name();
      sum.space = space.name();
      if (spec.model.family == "logistic") sum.glm_weight = to_string(w);
    }
  }
  if (candidates.size() > 1) sum.weight_trials = std::move(trials);

  sum.experiment = spec.name;
  sum.engine = "wgf";
  sum.criterion = crit.name();
  sum.reference_value = spec.reference_value;
  sum.termination = to_string(best.trace.termination);
  sum.seed = spec.wgf.seed;
  sum.iterations = static_cast<int>(best.trace.records.size()) - 1;
  sum.wall_time_ms = elapsed_ms(t0);
  return best;
}

PsoOutcome run_pso(const ExperimentSpec& spec) {
  const auto t0 = Clock::now();
  const Criterion& crit = spec.wgf.criterion;
  // PSO has no convention search of its own; it follows the flow's choice
  // when one is pinned and otherwise uses the classical Fisher weight.
  const RegressionModel model = build_model(spec.model, GlmWeight::fisher);
  const DesignSpace space = build_space(spec.space, model.input_dim());

  PsoOutcome out;
  out.ensemble = pso_ensemble(model, space, crit, spec.pso, spec.pso_runs, &out.traces);

  RunSummary& sum = out.summary;
  sum.experiment = spec.name;
  sum.engine = "pso";
  sum.criterion = crit.name();
  // Best run in the table orientation.
  double best = -std::numeric_limits<double>::infinity();
  for (double v : out.ensemble.finals) best = std::max(best, v);
  sum.final_value = reported_value(crit, best);
  sum.reference_value = spec.reference_value;
  sum.termination = to_string(Termination::max_iters);
  sum.model = model.name();
  sum.space = space.name();
  sum.seed = spec.pso.seed;
  sum.iterations = spec.pso.max_iters;
  if (spec.model.family == "logistic")
    sum.glm_weight = to_string(spec.model.weight.value_or(GlmWeight::fisher));

  EnsembleSummary reported = out.ensemble;
  if (crit.reported_as_minimum()) {
    for (double& v : reported.finals) v = -v;
    reported = summarize(std::move(reported.finals));
  }
  sum.ensemble = std::move(reported);
  sum.wall_time_ms = elapsed_ms(t0);
  return out;
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
}

template <class F>
void write_with(const fs::path& path, F&& writer) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  writer(out);
}

// Iteration-by-iteration values in the table orientation.
std::vector<TraceRecord> oriented(const std::vector<TraceRecord>& recs, bool flip) {
  if (!flip) return recs;
  std::vector<TraceRecord> out = recs;
  for (TraceRecord& r : out) r.value = -r.value;
  return out;
}

bool flips(const RunSummary& s) {
  const CriterionKind k = criterion_kind_from_string(s.criterion);
  return k == CriterionKind::A || k == CriterionKind::L || k == CriterionKind::c;
}

}  // namespace

void write_wgf_artifacts(const std::string& out_dir, const WgfOutcome& outcome) {
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  write_with(dir / "wgf_trace.csv",
             [&](std::ostream& o) { write_trace_csv(o, outcome.trace.records); });
  write_with(dir / "wgf_design.csv",
             [&](std::ostream& o) { write_design_csv(o, outcome.trace.final_measure); });
  write_text(dir / "wgf_summary.json", outcome.summary.to_json());
  write_comparison_plot((dir / "wgf.svg").string(), outcome.summary.experiment, &outcome, nullptr);
}

void write_pso_artifacts(const std::string& out_dir, const PsoOutcome& outcome) {
  const fs::path dir(out_dir);
  fs::create_directories(dir / "pso");
  for (std::size_t r = 0; r < outcome.traces.size(); ++r)
    write_with(dir / "pso" / fmt::format("trace_{:03d}.csv", r),
               [&](std::ostream& o) { write_trace_csv(o, outcome.traces[r].records); });

  std::size_t best = 0;
  for (std::size_t r = 1; r < outcome.traces.size(); ++r)
    if (outcome.traces[r].final_value() > outcome.traces[best].final_value()) best = r;
  write_with(dir / "pso_design.csv",
             [&](std::ostream& o) { write_design_csv(o, outcome.traces[best].final_measure); });
  write_text(dir / "pso_summary.json", outcome.summary.to_json());
  write_comparison_plot((dir / "pso.svg").string(), outcome.summary.experiment, nullptr, &outcome);
}

void write_comparison_plot(const std::string& path, const std::string& title,
                           const WgfOutcome* wgf, const PsoOutcome* pso, int smooth_window) {
  std::vector<Series> series;
  std::string ylabel = "criterion value";
  if (wgf != nullptr) {
    ylabel = wgf->summary.criterion + " criterion";
    Series s = trace_series(oriented(wgf->trace.records, flips(wgf->summary)), "WGF");
    if (smooth_window > 1) s = block_average(s, smooth_window);
    series.push_back(std::move(s));
  }
  if (pso != nullptr) {
    ylabel = pso->summary.criterion + " criterion";
    std::vector<std::vector<TraceRecord>> recs;
    recs.reserve(pso->traces.size());
    for (const FlowTrace& t : pso->traces) recs.push_back(oriented(t.records, flips(pso->summary)));
    series.push_back(mean_series(recs, fmt::format("PSO (mean of {})", recs.size())));
  }
  PlotOptions opts;
  opts.title = title;
  opts.ylabel = ylabel;
  write_svg_file(path, series, opts);
}

}  // namespace wgfd
