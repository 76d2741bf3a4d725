#include "wgfd/flow.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

namespace wgfd {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& records) {
  out << "iter,value,dirnorm,step\n";
  for (const TraceRecord& r : records)
    out << fmt::format("{},{:.12g},{:.12g},{:.12g}\n", r.iter, r.value, r.dirnorm, r.step);
}

std::vector<TraceRecord> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != "iter,value,dirnorm,step")
    throw std::invalid_argument("trace CSV must start with 'iter,value,dirnorm,step'");
  std::vector<TraceRecord> records;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 4) throw std::invalid_argument("trace CSV row needs 4 fields: " + line);
    try {
      records.push_back({std::stoi(cells[0]), std::stod(cells[1]), std::stod(cells[2]),
                         std::stod(cells[3])});
    } catch (const std::logic_error&) {
      throw std::invalid_argument("trace CSV row is not numeric: " + line);
    }
  }
  return records;
}

void write_design_csv(std::ostream& out, const DesignMeasure& measure) {
  for (int j = 0; j < measure.dim(); ++j) out << (j ? "," : "") << "x_" << j + 1;
  out << '\n';
  for (int i = 0; i < measure.size(); ++i) {
    for (int j = 0; j < measure.dim(); ++j)
      out << (j ? "," : "") << fmt::format("{:.12g}", measure.points()(j, i));
    out << '\n';
  }
}

DesignMeasure read_design_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("design CSV is empty");
  const auto d = split_csv(strip_cr(line)).size();
  std::vector<double> vals;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != d) throw std::invalid_argument("design CSV row has wrong width: " + line);
    for (const auto& c : cells) vals.push_back(std::stod(c));
  }
  if (vals.empty()) throw std::invalid_argument("design CSV has no rows");
  const auto n = static_cast<Eigen::Index>(vals.size() / d);
  Matrix pts = Eigen::Map<Matrix>(vals.data(), static_cast<Eigen::Index>(d), n);
  return DesignMeasure(std::move(pts));
}

}  // namespace wgfd
