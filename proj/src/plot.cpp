#include "wgfd/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace wgfd {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Tick step of the form {1, 2, 5} * 10^k giving roughly `target` ticks.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0})
    if (raw <= m * mag) return m * mag;
  return 10.0 * mag;
}

}  // namespace

Series trace_series(const std::vector<TraceRecord>& records, std::string label) {
  if (records.empty()) throw std::invalid_argument("cannot plot an empty trace");
  Series s{std::move(label), {}, {}};
  s.x.reserve(records.size());
  s.y.reserve(records.size());
  for (const TraceRecord& r : records) {
    s.x.push_back(r.iter);
    s.y.push_back(r.value);
  }
  return s;
}

Series mean_series(const std::vector<std::vector<TraceRecord>>& traces, std::string label) {
  if (traces.empty()) throw std::invalid_argument("mean of zero traces");
  std::size_t len = std::numeric_limits<std::size_t>::max();
  for (const auto& t : traces) len = std::min(len, t.size());
  if (len == 0) throw std::invalid_argument("cannot plot an empty trace");

  Series s{std::move(label), std::vector<double>(len), std::vector<double>(len, 0.0)};
  for (std::size_t i = 0; i < len; ++i) {
    s.x[i] = traces.front()[i].iter;
    for (const auto& t : traces) s.y[i] += t[i].value;
    s.y[i] /= static_cast<double>(traces.size());
  }
  return s;
}

Series block_average(const Series& s, int window) {
  if (window < 1) throw std::invalid_argument("smoothing window must be >= 1");
  Series out{s.label, {}, {}};
  for (std::size_t start = 0; start < s.y.size(); start += static_cast<std::size_t>(window)) {
    const std::size_t end = std::min(s.y.size(), start + static_cast<std::size_t>(window));
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t i = start; i < end; ++i) {
      sx += s.x[i];
      sy += s.y[i];
    }
    const auto n = static_cast<double>(end - start);
    out.x.push_back(sx / n);
    out.y.push_back(sy / n);
  }
  return out;
}

std::string render_svg(const std::vector<Series>& series, const PlotOptions& opts) {
  if (series.empty()) throw std::invalid_argument("nothing to plot");

  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  double ymin = xmin;
  double ymax = -xmin;
  for (const Series& s : series) {
    if (s.x.size() != s.y.size()) throw std::invalid_argument("series x and y lengths differ");
    if (s.x.empty()) throw std::invalid_argument("cannot plot an empty series");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!std::isfinite(xmin)) throw std::invalid_argument("no finite points to plot");
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) {
    ymin -= 0.5 * std::max(1.0, std::abs(ymin));
    ymax += 0.5 * std::max(1.0, std::abs(ymax));
  }
  const double ypad = 0.04 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  const double left = 80, right = 20, top = 40, bottom = 55;
  const double pw = opts.width - left - right;
  const double ph = opts.height - top - bottom;
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      opts.width, opts.height);
  if (!opts.title.empty())
    svg += fmt::format("<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
                       opts.width / 2, escape_xml(opts.title));

  const double xstep = nice_step(xmax - xmin, 6);
  for (double t = std::ceil(xmin / xstep) * xstep; t <= xmax + 1e-9 * xstep; t += xstep) {
    svg += fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"#ddd\"/>\n"
        "<text x=\"{0:.2f}\" y=\"{3:.2f}\" text-anchor=\"middle\">{4:g}</text>\n",
        px(t), top, top + ph, top + ph + 16, t);
  }
  const double ystep = nice_step(ymax - ymin, 6);
  for (double t = std::ceil(ymin / ystep) * ystep; t <= ymax + 1e-9 * ystep; t += ystep) {
    const double v = std::abs(t) < 1e-12 * ystep ? 0.0 : t;
    svg += fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"#ddd\"/>\n"
        "<text x=\"{3:.2f}\" y=\"{4:.2f}\" text-anchor=\"end\">{5:g}</text>\n",
        left, py(t), left + pw, left - 6, py(t) + 4, v);
  }
  svg += fmt::format(
      "<rect x=\"{}\" y=\"{}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" stroke=\"black\"/>\n",
      left, top, pw, ph);
  svg += fmt::format("<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
                     left + pw / 2, opts.height - 12, escape_xml(opts.xlabel));
  svg += fmt::format(
      "<text x=\"16\" y=\"{0:.2f}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {0:.2f})\">"
      "{1}</text>\n",
      top + ph / 2, escape_xml(opts.ylabel));

  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    std::string pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      pts += fmt::format("{:.2f},{:.2f} ", px(s.x[i]), py(s.y[i]));
    }
    if (!pts.empty()) pts.pop_back();
    svg += fmt::format(
        "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", color,
        pts);
    const double ly = top + 16 + 16.0 * static_cast<double>(k);
    svg += fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"{3}\" "
        "stroke-width=\"2\"/>\n<text x=\"{4:.2f}\" y=\"{5:.2f}\">{6}</text>\n",
        left + pw - 150, ly, left + pw - 130, color, left + pw - 125, ly + 4,
        escape_xml(s.label));
  }
  svg += "</svg>\n";
  return svg;
}

void write_svg_file(const std::string& path, const std::vector<Series>& series,
                    const PlotOptions& opts) {
  const std::string svg = render_svg(series, opts);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << svg;
}

}  // namespace wgfd
