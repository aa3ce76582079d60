#pragma once

// Human-readable renderings of JSON reports. Numbers are rounded to six
// significant digits; the JSON form keeps full precision.

#include <string>

#include "fpcav/fit.hpp"
#include "fpcav/serialize.hpp"

namespace fpcav {

[[nodiscard]] std::string format_rounded(double v, int significant = 6);

/// One "dotted.key  value" line per leaf, keys in JSON object order.
[[nodiscard]] std::string text_report(const json& report);

/// Fixed-format fit report: header lines, then "name  value  error" per parameter.
[[nodiscard]] std::string fit_text_report(const FitResult& result);

}  // namespace fpcav
