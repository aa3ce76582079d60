#include "fpcav/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

namespace fpcav {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct ModelInfo {
  ModelId id;
  std::string_view name;
  std::vector<std::string> names;
  std::vector<ParamKind> kinds;
};

const std::vector<ModelInfo>& registry() {
  using K = ParamKind;
  static const std::vector<ModelInfo> models = {
      {ModelId::lorentzian, "lorentzian", {"center", "fwhm", "amplitude", "background"},
       {K::x_location, K::x_scale, K::y_level, K::y_level}},
      {ModelId::inverted_lorentzian, "inverted_lorentzian", {"center", "fwhm", "depth", "baseline"},
       {K::x_location, K::x_scale, K::y_level, K::y_level}},
      {ModelId::power_law, "power_law", {"r0", "beta", "background"},
       {K::y_level, K::other, K::y_level}},
      {ModelId::sqrt_offset, "sqrt_offset", {"alpha", "gamma0"}, {K::other, K::y_level}},
      {ModelId::exp_decay, "exp_decay", {"amplitude", "lifetime", "background"},
       {K::y_level, K::x_scale, K::y_level}},
      {ModelId::linear, "linear", {"slope", "intercept"}, {K::other, K::y_level}},
  };
  return models;
}

const ModelInfo& info(ModelId id) {
  for (const auto& m : registry()) {
    if (m.id == id) return m;
  }
  throw std::invalid_argument("unknown model id");
}

}  // namespace

FitModel FitModel::make(ModelId id) {
  const auto& m = info(id);
  FitModel model;
  model.id = id;
  model.names = m.names;
  model.kinds = m.kinds;
  model.lower.assign(m.names.size(), -kInf);
  model.upper.assign(m.names.size(), kInf);
  return model;
}

std::size_t FitModel::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  throw std::invalid_argument("model has no parameter '" + std::string(name) + "'");
}

std::string_view to_string(ModelId id) { return info(id).name; }

ModelId parse_model_id(std::string_view name) {
  for (const auto& m : registry()) {
    if (m.name == name) return m.id;
  }
  throw std::invalid_argument("unknown fit model '" + std::string(name) + "'");
}

double evaluate(ModelId id, double x, std::span<const double> p) {
  switch (id) {
    case ModelId::lorentzian:
      return p[2] * unit_lorentzian(x, p[0], p[1]) + p[3];
    case ModelId::inverted_lorentzian:
      return p[3] - p[2] * unit_lorentzian(x, p[0], p[1]);
    case ModelId::power_law:
      return p[0] * std::pow(x, p[1]) + p[2];
    case ModelId::sqrt_offset:
      return p[0] * std::sqrt(x) + p[1];
    case ModelId::exp_decay:
      return p[0] * std::exp(-x / p[1]) + p[2];
    case ModelId::linear:
      return p[0] * x + p[1];
  }
  return kNaN;
}

double FitResult::value(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return parameters[i];
  }
  throw std::invalid_argument("fit result has no parameter '" + std::string(name) + "'");
}

double FitResult::error(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return standard_errors[i];
  }
  throw std::invalid_argument("fit result has no parameter '" + std::string(name) + "'");
}

namespace {

struct DataScales {
  double x_span = 1.0;
  double y_span = 1.0;
};

DataScales scales_of(std::span<const double> x, std::span<const double> y) {
  DataScales s;
  if (!x.empty()) {
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    s.x_span = std::max(*hi - *lo, std::max(std::abs(*lo), std::abs(*hi)));
  }
  if (!y.empty()) {
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    s.y_span = std::max(*hi - *lo, std::max(std::abs(*lo), std::abs(*hi)));
  }
  if (!(s.x_span > 0.0)) s.x_span = 1.0;
  if (!(s.y_span > 0.0)) s.y_span = 1.0;
  return s;
}

double step_for(const FitModel& model, std::size_t j, double value, const DataScales& s,
                double relative_step) {
  // Offsets are stepped on the data scale so a value near zero does not
  // shrink the step below round-off.
  const double v = std::abs(value);
  switch (model.kinds[j]) {
    case ParamKind::x_location:
      return relative_step * std::max(v, s.x_span);
    case ParamKind::y_level:
      return relative_step * std::max(v, s.y_span);
    case ParamKind::x_scale:
      return relative_step * (v > 0.0 ? v : s.x_span);
    case ParamKind::other:
      break;
  }
  return relative_step * (v > 0.0 ? v : 1.0);
}

std::vector<double> jacobian_impl(const FitModel& model, std::span<const double> x,
                                  std::span<const double> params, double relative_step,
                                  const DataScales& scales) {
  const std::size_t n = x.size();
  const std::size_t p = params.size();
  std::vector<double> jac(n * p);
  std::vector<double> plus(params.begin(), params.end());
  std::vector<double> minus(params.begin(), params.end());
  for (std::size_t j = 0; j < p; ++j) {
    const double h = step_for(model, j, params[j], scales, relative_step);
    plus[j] = params[j] + h;
    minus[j] = params[j] - h;
    const double width = plus[j] - minus[j];
    for (std::size_t i = 0; i < n; ++i) {
      jac[i * p + j] = (evaluate(model.id, x[i], plus) - evaluate(model.id, x[i], minus)) / width;
    }
    plus[j] = params[j];
    minus[j] = params[j];
  }
  return jac;
}

void project(const FitModel& model, std::vector<double>& params) {
  for (std::size_t j = 0; j < params.size(); ++j) {
    params[j] = std::clamp(params[j], model.lower[j], model.upper[j]);
  }
}

// Width-like parameters enter squared or through a sign-symmetric shape;
// report them positive.
void canonicalize(ModelId id, std::vector<double>& params) {
  if (id == ModelId::lorentzian || id == ModelId::inverted_lorentzian) {
    params[1] = std::abs(params[1]);
  }
}

double weighted_cost(const FitModel& model, std::span<const double> x, std::span<const double> y,
                     std::span<const double> w, std::span<const double> params,
                     std::vector<double>* residuals) {
  double cost = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = std::sqrt(w[i]) * (y[i] - evaluate(model.id, x[i], params));
    if (residuals) (*residuals)[i] = r;
    cost += r * r;
  }
  return std::isfinite(cost) ? cost : kInf;
}

}  // namespace

std::vector<double> numeric_jacobian(const FitModel& model, std::span<const double> x,
                                     std::span<const double> params, double relative_step) {
  if (params.size() != model.parameter_count()) {
    throw std::invalid_argument("parameter count does not match model");
  }
  return jacobian_impl(model, x, params, relative_step, scales_of(x, {}));
}

FitResult fit(const FitModel& model, const Trace& trace, std::span<const double> initial,
              const FitOptions& options) {
  trace.validate();
  const std::size_t n = trace.size();
  const std::size_t p = model.parameter_count();
  if (initial.size() != p) throw FitError("initial guess has the wrong number of parameters");
  if (n <= p) throw FitError("need more data points than parameters");
  for (double v : initial) {
    if (!std::isfinite(v)) throw FitError("initial guess must be finite");
  }

  std::vector<double> w(n, 1.0);
  if (options.weights) {
    if (options.weights->size() != n) throw FitError("weights have the wrong length");
    w = *options.weights;
  } else if (options.weighting == Weighting::poisson) {
    for (std::size_t i = 0; i < n; ++i) w[i] = 1.0 / std::max(trace.y[i], 1.0);
  }

  const DataScales scales = scales_of(trace.x, trace.y);
  std::vector<double> params(initial.begin(), initial.end());
  project(model, params);
  std::vector<double> residuals(n);
  double cost = weighted_cost(model, trace.x, trace.y, w, params, &residuals);
  if (!std::isfinite(cost)) throw FitError("model is not finite at the initial guess");

  double signal = 0.0;
  for (std::size_t i = 0; i < n; ++i) signal += w[i] * trace.y[i] * trace.y[i];
  const double exact_floor = 1e-28 * std::max(signal, std::numeric_limits<double>::min());

  using Matrix = Eigen::MatrixXd;
  using Vector = Eigen::VectorXd;
  Matrix jw(n, p);
  auto fill_jacobian = [&] {
    const auto jac = jacobian_impl(model, trace.x, params, 1e-6, scales);
    for (std::size_t i = 0; i < n; ++i) {
      const double sw = std::sqrt(w[i]);
      for (std::size_t j = 0; j < p; ++j) jw(i, j) = sw * jac[i * p + j];
    }
  };

  FitResult result;
  result.model = model.id;
  result.names = model.names;
  result.points = n;

  double lambda = 1e-3;
  std::vector<double> trial(p);
  std::vector<double> trial_residuals(n);
  const double negligible = 1e-20 * std::max(signal, std::numeric_limits<double>::min());
  bool converged = cost <= exact_floor;
  bool stop = converged;
  int iter = 0;
  double grad_cos = 0.0;

  while (!stop && iter < options.max_iterations) {
    ++iter;
    fill_jacobian();
    const Matrix a = jw.transpose() * jw;
    const Vector r = Eigen::Map<const Vector>(residuals.data(), static_cast<Eigen::Index>(n));
    const Vector g = jw.transpose() * r;

    Vector scale(p);
    for (std::size_t j = 0; j < p; ++j) {
      scale(j) = a(j, j) > 0.0 ? 1.0 / std::sqrt(a(j, j)) : 1.0;
    }
    grad_cos = 0.0;
    const double r_norm = std::sqrt(cost);
    for (std::size_t j = 0; j < p; ++j) {
      if (a(j, j) > 0.0 && r_norm > 0.0) {
        grad_cos = std::max(grad_cos, std::abs(g(j)) * scale(j) / r_norm);
      }
    }
    const Matrix a_scaled = scale.asDiagonal() * a * scale.asDiagonal();
    const Vector g_scaled = scale.asDiagonal() * g;

    for (;;) {
      Matrix damped = a_scaled;
      damped.diagonal().array() += lambda;
      const Vector step = scale.asDiagonal() * damped.ldlt().solve(g_scaled);
      for (std::size_t j = 0; j < p; ++j) trial[j] = params[j] + step(static_cast<Eigen::Index>(j));
      project(model, trial);
      const double trial_cost =
          weighted_cost(model, trace.x, trace.y, w, trial, &trial_residuals);

      bool small_step = true;
      for (std::size_t j = 0; j < p; ++j) {
        const double denom = std::abs(params[j]) + options.tolerance;
        if (std::abs(trial[j] - params[j]) > options.tolerance * denom) small_step = false;
      }

      if (trial_cost < cost) {
        params = trial;
        residuals.swap(trial_residuals);
        cost = trial_cost;
        lambda = std::max(lambda / 10.0, 1e-12);
        if (small_step || cost <= exact_floor) converged = stop = true;
        break;
      }
      lambda *= 10.0;
      if (small_step || lambda > 1e16) {
        // No downhill step at working precision: accept as the minimum only
        // if the residual is orthogonal to the Jacobian or already negligible.
        converged = grad_cos < 1e-6 || cost <= negligible;
        stop = true;
        break;
      }
    }
  }

  canonicalize(model.id, params);
  result.parameters = params;
  result.residual_sum_of_squares = cost;
  result.converged = converged;
  result.iterations = iter;
  result.gradient_norm = grad_cos;

  // Covariance at the optimum.
  fill_jacobian();
  const Matrix a = jw.transpose() * jw;
  Vector scale(p);
  bool singular = false;
  for (std::size_t j = 0; j < p; ++j) {
    if (!(a(j, j) > 0.0)) singular = true;
    scale(j) = a(j, j) > 0.0 ? 1.0 / std::sqrt(a(j, j)) : 1.0;
  }
  result.standard_errors.assign(p, kNaN);
  if (!singular) {
    const Matrix a_scaled = scale.asDiagonal() * a * scale.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(a_scaled);
    const double min_ev = eig.eigenvalues().minCoeff();
    const double max_ev = eig.eigenvalues().maxCoeff();
    if (eig.info() == Eigen::Success && min_ev > 1e-13 * max_ev) {
      const Matrix inv_scaled = eig.eigenvectors() *
                                eig.eigenvalues().cwiseInverse().asDiagonal() *
                                eig.eigenvectors().transpose();
      const double s2 = cost / static_cast<double>(n - p);
      for (std::size_t j = 0; j < p; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        result.standard_errors[j] = std::sqrt(s2 * inv_scaled(jj, jj)) * scale(jj);
      }
      result.errors_available = true;
    }
  }
  return result;
}

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LineFit least_squares_line(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw FitError("degenerate abscissa for initial guess");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

// Linear interpolation of the x where y crosses `level`, walking outward
// from index `peak` in direction `dir`. Returns NaN if never crossed.
double crossing(const Trace& t, std::size_t peak, int dir, double level, bool above) {
  std::size_t i = peak;
  while (true) {
    if ((dir < 0 && i == 0) || (dir > 0 && i + 1 >= t.size())) return kNaN;
    const std::size_t next = dir < 0 ? i - 1 : i + 1;
    const bool crossed = above ? t.y[next] <= level : t.y[next] >= level;
    if (crossed) {
      const double frac = (level - t.y[i]) / (t.y[next] - t.y[i]);
      return t.x[i] + frac * (t.x[next] - t.x[i]);
    }
    i = next;
  }
}

std::vector<double> peak_from_crossings(const Trace& t, bool inverted) {
  const auto [lo_it, hi_it] = std::minmax_element(t.y.begin(), t.y.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo)) throw FitError("constant trace: cannot seed a width model");
  const auto peak = static_cast<std::size_t>((inverted ? lo_it : hi_it) - t.y.begin());
  const double half = 0.5 * (lo + hi);
  const double left = crossing(t, peak, -1, half, !inverted);
  const double right = crossing(t, peak, +1, half, !inverted);
  const double center = t.x[peak];
  double fwhm;
  if (std::isfinite(left) && std::isfinite(right)) {
    fwhm = right - left;
  } else if (std::isfinite(left)) {
    fwhm = 2.0 * (center - left);
  } else if (std::isfinite(right)) {
    fwhm = 2.0 * (right - center);
  } else {
    fwhm = 0.5 * (t.x.back() - t.x.front());
  }
  if (!(fwhm > 0.0)) fwhm = 0.5 * (t.x.back() - t.x.front());
  if (inverted) return {center, fwhm, hi - lo, hi};
  return {center, fwhm, hi - lo, lo};
}

Trace moving_average(const Trace& t, std::size_t half) {
  Trace s = t;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(t.size() - 1, i + half);
    double sum = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) sum += t.y[k];
    s.y[i] = sum / static_cast<double>(hi - lo + 1);
  }
  return s;
}

// Refits height and level by linear least squares for a fixed center and
// width; returns the residual sum of squares.
double refine_levels(const Trace& t, std::vector<double>& p, bool inverted) {
  double s11 = 0.0, s1 = 0.0, sy1 = 0.0, sy = 0.0;
  const double n = static_cast<double>(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double l = unit_lorentzian(t.x[i], p[0], p[1]);
    s11 += l * l;
    s1 += l;
    sy1 += t.y[i] * l;
    sy += t.y[i];
  }
  const double det = s11 * n - s1 * s1;
  if (!(std::abs(det) > 0.0)) return std::numeric_limits<double>::infinity();
  const double a = (sy1 * n - s1 * sy) / det;
  const double b = (s11 * sy - s1 * sy1) / det;
  p[2] = inverted ? -a : a;
  p[3] = b;
  double rss = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = t.y[i] - (a * unit_lorentzian(t.x[i], p[0], p[1]) + b);
    rss += r * r;
  }
  return rss;
}

// Half-maximum crossings on the raw and on progressively smoothed data; the
// candidate with the smallest residual wins, which keeps isolated noise
// spikes from seeding a spuriously narrow line.
std::vector<double> guess_peak(const Trace& t, bool inverted) {
  std::vector<double> best = peak_from_crossings(t, inverted);
  double best_rss = kNaN;
  for (const std::size_t half : {std::size_t{0}, t.size() / 100, t.size() / 40}) {
    if (half == 0 && !std::isnan(best_rss)) continue;
    std::vector<double> p = peak_from_crossings(half ? moving_average(t, half) : t, inverted);
    if (half) p[1] = std::max(p[1] - 2.0 * static_cast<double>(half) * (t.x.back() - t.x.front()) /
                                         static_cast<double>(t.size() - 1),
                              0.5 * p[1]);
    std::vector<double> trial = p;
    const double rss = refine_levels(t, trial, inverted);
    if (std::isnan(best_rss) || rss < best_rss) {
      best_rss = rss;
      best = (trial[2] > 0.0) ? trial : p;
    }
  }
  return best;
}

std::size_t nearest_index(const Trace& t, double x) {
  const auto it = std::lower_bound(t.x.begin(), t.x.end(), x);
  if (it == t.x.begin()) return 0;
  if (it == t.x.end()) return t.size() - 1;
  const auto i = static_cast<std::size_t>(it - t.x.begin());
  return (x - t.x[i - 1] <= t.x[i] - x) ? i - 1 : i;
}

double window_mean(const Trace& t, std::size_t center, std::size_t half) {
  const std::size_t lo = center >= half ? center - half : 0;
  const std::size_t hi = std::min(t.size() - 1, center + half);
  double s = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) s += t.y[i];
  return s / static_cast<double>(hi - lo + 1);
}

std::vector<double> guess_decay(const Trace& t) {
  // Three equally spaced windows give r = exp(-dx/tau) and the background
  // exactly for a noiseless exponential on a uniform grid.
  const std::size_t n = t.size();
  const std::size_t half = n >= 60 ? n / 30 : 0;
  const std::size_t i0 = half;
  const std::size_t i2 = n - 1 - half;
  const std::size_t i1 = nearest_index(t, 0.5 * (t.x[i0] + t.x[i2]));
  const double m0 = window_mean(t, i0, half);
  const double m1 = window_mean(t, i1, half);
  const double m2 = window_mean(t, i2, half);
  const double dx = t.x[i1] - t.x[i0];

  double tau = kNaN;
  double background = kNaN;
  const double ratio = (m2 - m1) / (m1 - m0);
  if (std::isfinite(ratio) && ratio > 0.0 && ratio < 1.0 && dx > 0.0) {
    tau = -dx / std::log(ratio);
    background = (m0 * m2 - m1 * m1) / (m0 + m2 - 2.0 * m1);
  } else {
    background = *std::min_element(t.y.begin(), t.y.end());
    const double a0 = m0 - background;
    const double a1 = m1 - background;
    if (a0 > 0.0 && a1 > 0.0 && a0 > a1 && dx > 0.0) tau = dx / std::log(a0 / a1);
  }
  if (!std::isfinite(tau) || !(tau > 0.0)) throw FitError("cannot seed exp_decay: no decay found");

  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = std::exp(-t.x[i] / tau);
    num += (t.y[i] - background) * e;
    den += e * e;
  }
  if (!(den > 0.0)) throw FitError("cannot seed exp_decay amplitude");
  return {num / den, tau, background};
}

}  // namespace

std::vector<double> auto_initial_guess(const FitModel& model, const Trace& trace) {
  trace.validate();
  if (trace.size() == 0) throw FitError("empty trace");
  switch (model.id) {
    case ModelId::lorentzian:
      return guess_peak(trace, false);
    case ModelId::inverted_lorentzian:
      return guess_peak(trace, true);
    case ModelId::power_law: {
      std::vector<double> lx;
      std::vector<double> ly;
      for (std::size_t i = 0; i < trace.size(); ++i) {
        if (trace.x[i] > 0.0 && trace.y[i] > 0.0) {
          lx.push_back(std::log(trace.x[i]));
          ly.push_back(std::log(trace.y[i]));
        }
      }
      if (lx.size() < 2) throw FitError("power_law guess needs two positive points");
      const auto line = least_squares_line(lx, ly);
      return {std::exp(line.intercept), line.slope, 0.0};
    }
    case ModelId::sqrt_offset: {
      std::vector<double> sx;
      for (double v : trace.x) {
        if (v < 0.0) throw FitError("sqrt_offset needs x >= 0");
        sx.push_back(std::sqrt(v));
      }
      const auto line = least_squares_line(sx, trace.y);
      return {line.slope, line.intercept};
    }
    case ModelId::exp_decay:
      if (trace.size() < 3) throw FitError("exp_decay guess needs three points");
      return guess_decay(trace);
    case ModelId::linear: {
      const auto line = least_squares_line(trace.x, trace.y);
      return {line.slope, line.intercept};
    }
  }
  throw FitError("unknown model");
}

FitResult fit_range(const FitModel& model, const Trace& trace, double x_min, double x_max,
                    std::span<const double> initial, const FitOptions& options) {
  trace.validate();
  Trace sub;
  sub.noise = trace.noise;
  sub.seed = trace.seed;
  FitOptions sub_options = options;
  if (options.weights) {
    if (options.weights->size() != trace.size()) throw FitError("weights have the wrong length");
    sub_options.weights.emplace();
  }
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace.x[i] >= x_min && trace.x[i] <= x_max) {
      sub.x.push_back(trace.x[i]);
      sub.y.push_back(trace.y[i]);
      if (options.weights) sub_options.weights->push_back((*options.weights)[i]);
    }
  }
  if (sub.size() <= model.parameter_count()) {
    throw FitError("fit range holds too few points for the model");
  }
  if (initial.empty()) {
    const auto guess = auto_initial_guess(model, sub);
    return fit(model, sub, guess, sub_options);
  }
  return fit(model, sub, initial, sub_options);
}

}  // namespace fpcav
