#pragma once

// CSV traces with a mandatory "x,y" header, comma separator, '.' decimal
// point and LF line endings, plus an optional JSON sidecar.

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpcav/serialize.hpp"
#include "fpcav/spectra.hpp"

namespace fpcav {

/// Malformed or unreadable input data. `line` is 1-based, 0 when not tied to a line.
class InputError : public std::runtime_error {
 public:
  InputError(const std::string& message, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Shortest decimal text that round-trips the double.
[[nodiscard]] std::string format_number(double v);

void write_trace_csv(std::ostream& out, const Trace& trace);
[[nodiscard]] Trace read_trace_csv(std::istream& in);

void write_trace_file(const std::string& path, const Trace& trace);
[[nodiscard]] Trace read_trace_file(const std::string& path);

/// "<csv path>.json".
[[nodiscard]] std::string sidecar_path(const std::string& csv_path);
void write_json_file(const std::string& path, const json& value);

/// Generic table writer; every row must have header.size() cells.
void write_csv(std::ostream& out, std::span<const std::string> header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace fpcav
