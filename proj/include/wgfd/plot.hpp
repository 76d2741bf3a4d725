#pragma once

#include "wgfd/flow.hpp"

#include <string>
#include <vector>

namespace wgfd {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Iteration vs criterion value. Throws std::invalid_argument on an empty trace.
Series trace_series(const std::vector<TraceRecord>& records, std::string label);

/// Per-iteration arithmetic mean over several traces, cut to the shortest one.
Series mean_series(const std::vector<std::vector<TraceRecord>>& traces, std::string label);

/// Averages consecutive blocks of `window` points (x and y alike); a trailing
/// partial block is averaged over what it has.
Series block_average(const Series& s, int window);

struct PlotOptions {
  std::string title;
  std::string xlabel = "iteration";
  std::string ylabel = "criterion value";
  int width = 720;
  int height = 450;
};

/// Standalone SVG document with one polyline per series. Non-finite points
/// are dropped.
std::string render_svg(const std::vector<Series>& series, const PlotOptions& opts = {});

void write_svg_file(const std::string& path, const std::vector<Series>& series,
                    const PlotOptions& opts = {});

}  // namespace wgfd
