#include "fpcav/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace fpcav {

namespace {

void walk(const json& node, const std::string& prefix, std::ostringstream& out) {
  if (node.is_object()) {
    for (auto it = node.begin(); it != node.end(); ++it) {
      walk(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    }
    return;
  }
  if (node.is_array() && !node.empty() && (node.front().is_object() || node.front().is_array())) {
    for (std::size_t i = 0; i < node.size(); ++i) {
      walk(node[i], prefix + "[" + std::to_string(i) + "]", out);
    }
    return;
  }
  out << prefix << "  ";
  if (node.is_number_float()) {
    out << format_rounded(node.get<double>());
  } else if (node.is_string()) {
    out << node.get<std::string>();
  } else if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i) {
      out << (i ? " " : "")
          << (node[i].is_number_float() ? format_rounded(node[i].get<double>()) : node[i].dump());
    }
  } else {
    out << node.dump();
  }
  out << '\n';
}

}  // namespace

std::string format_rounded(double v, int significant) {
  if (std::isnan(v)) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant, v);
  return buf;
}

std::string text_report(const json& report) {
  std::ostringstream out;
  walk(report, "", out);
  return out.str();
}

std::string fit_text_report(const FitResult& r) {
  std::ostringstream out;
  char line[160];
  out << "model  " << to_string(r.model) << '\n';
  out << "points  " << r.points << '\n';
  out << "converged  " << (r.converged ? "true" : "false") << '\n';
  out << "iterations  " << r.iterations << '\n';
  out << "rss  " << format_rounded(r.residual_sum_of_squares) << '\n';
  std::snprintf(line, sizeof line, "%-12s %16s %16s\n", "parameter", "value", "error");
  out << line;
  for (std::size_t i = 0; i < r.names.size(); ++i) {
    std::snprintf(line, sizeof line, "%-12s %16s %16s\n", r.names[i].c_str(),
                  format_rounded(r.parameters[i]).c_str(),
                  format_rounded(r.standard_errors[i]).c_str());
    out << line;
  }
  return out.str();
}

}  // namespace fpcav
