#include "fpcav/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace fpcav {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_cell(std::string_view cell, std::size_t line, const char* column) {
  cell = trim(cell);
  if (cell.empty()) throw InputError(std::string("empty ") + column + " value", line);
  if (cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || end != cell.data() + cell.size()) {
    throw InputError(std::string("cannot parse ") + column + " value '" + std::string(cell) + "'",
                     line);
  }
  if (!std::isfinite(v)) throw InputError(std::string("non-finite ") + column + " value", line);
  return v;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return "nan";
  return {buf, end};
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  trace.validate();
  out << "x,y\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out << format_number(trace.x[i]) << ',' << format_number(trace.y[i]) << '\n';
  }
}

Trace read_trace_csv(std::istream& in) {
  Trace t;
  std::string line;
  std::size_t number = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view row = trim(line);
    if (!header) {
      if (row != "x,y") throw InputError("expected header 'x,y'", number);
      header = true;
      continue;
    }
    if (row.empty()) continue;
    const auto comma = row.find(',');
    if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
      throw InputError("expected exactly two comma-separated values", number);
    }
    const double x = parse_cell(row.substr(0, comma), number, "x");
    const double y = parse_cell(row.substr(comma + 1), number, "y");
    if (!t.x.empty() && !(x > t.x.back())) {
      throw InputError("x values must be strictly increasing", number);
    }
    t.x.push_back(x);
    t.y.push_back(y);
  }
  if (!header) throw InputError("empty file: missing 'x,y' header", number ? number : 1);
  if (t.x.empty()) throw InputError("no data rows", number + 1);
  return t;
}

void write_trace_file(const std::string& path, const Trace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  write_trace_csv(out, trace);
  if (!out) throw InputError("write to '" + path + "' failed");
}

Trace read_trace_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return read_trace_csv(in);
}

std::string sidecar_path(const std::string& csv_path) { return csv_path + ".json"; }

void write_json_file(const std::string& path, const json& value) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  out << value.dump(2) << '\n';
  if (!out) throw InputError("write to '" + path + "' failed");
}

void write_csv(std::ostream& out, std::span<const std::string> header,
               const std::vector<std::vector<std::string>>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw std::logic_error("csv row has the wrong width");
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

}  // namespace fpcav
