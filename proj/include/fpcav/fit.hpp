#pragma once

// Damped Gauss-Newton (Levenberg-Marquardt) least squares for the model
// shapes used in the spectroscopy analysis, with numerically differentiated
// Jacobians and normal-matrix standard errors.
//
// Standard errors are sqrt(diag(s^2 (J^T W J)^-1)) with the residual variance
// s^2 = RSS / (n - p) estimated from the fit itself.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fpcav/spectra.hpp"

namespace fpcav {

enum class ModelId { lorentzian, inverted_lorentzian, power_law, sqrt_offset, exp_decay, linear };

/// How a parameter relates to the data; used to pick finite-difference steps
/// for parameters that are exactly zero.
enum class ParamKind { x_location, x_scale, y_level, other };

struct FitModel {
  ModelId id = ModelId::linear;
  std::vector<std::string> names;
  std::vector<ParamKind> kinds;
  std::vector<double> lower;
  std::vector<double> upper;

  [[nodiscard]] static FitModel make(ModelId id);
  [[nodiscard]] std::size_t parameter_count() const noexcept { return names.size(); }
  [[nodiscard]] std::size_t index_of(std::string_view name) const;
};

[[nodiscard]] std::string_view to_string(ModelId id);
/// Throws std::invalid_argument for unknown names.
[[nodiscard]] ModelId parse_model_id(std::string_view name);

[[nodiscard]] double evaluate(ModelId id, double x, std::span<const double> params);

enum class Weighting { none, poisson };

struct FitOptions {
  Weighting weighting = Weighting::none;
  /// Explicit per-point weights; overrides `weighting` when set.
  std::optional<std::vector<double>> weights;
  int max_iterations = 200;
  double tolerance = 1e-10;
};

struct FitResult {
  ModelId model = ModelId::linear;
  std::vector<std::string> names;
  std::vector<double> parameters;
  std::vector<double> standard_errors;
  /// False when the normal matrix is singular; standard_errors are then NaN.
  bool errors_available = false;
  double residual_sum_of_squares = 0.0;
  bool converged = false;
  int iterations = 0;
  /// Largest |cos| between the residual vector and a Jacobian column.
  double gradient_norm = 0.0;
  std::size_t points = 0;

  [[nodiscard]] double value(std::string_view name) const;
  [[nodiscard]] double error(std::string_view name) const;
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Row-major n x p matrix of d model / d parameter by central differences.
[[nodiscard]] std::vector<double> numeric_jacobian(const FitModel& model,
                                                   std::span<const double> x,
                                                   std::span<const double> params,
                                                   double relative_step = 1e-6);

[[nodiscard]] FitResult fit(const FitModel& model, const Trace& trace,
                            std::span<const double> initial, const FitOptions& options = {});

/// Heuristic starting point. Throws FitError when the trace cannot seed the
/// model (for example a constant trace for a width model).
[[nodiscard]] std::vector<double> auto_initial_guess(const FitModel& model, const Trace& trace);

/// Fit restricted to x_min <= x <= x_max. Uses auto_initial_guess on the
/// subrange when `initial` is empty.
[[nodiscard]] FitResult fit_range(const FitModel& model, const Trace& trace, double x_min,
                                  double x_max, std::span<const double> initial = {},
                                  const FitOptions& options = {});

}  // namespace fpcav
