#include "fpcav/spectra.hpp"

#include <cmath>
#include <random>

namespace fpcav {

void Trace::validate() const {
  if (x.size() != y.size()) throw DomainError("trace: x and y differ in length");
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) throw DomainError("trace: x must be strictly increasing");
  }
}

double unit_lorentzian(double x, double center, double fwhm) noexcept {
  const double u = 2.0 * (x - center) / fwhm;
  return 1.0 / (1.0 + u * u);
}

namespace {

Trace finish(std::span<const double> grid, std::vector<double> mean, NoiseModel noise,
             std::uint64_t seed) {
  Trace t;
  t.x.assign(grid.begin(), grid.end());
  t.noise = noise;
  t.seed = seed;
  if (noise == NoiseModel::poisson) {
    Rng rng = make_stream(seed, 0);
    for (double& v : mean) {
      if (v < 0.0) throw DomainError("poisson noise needs a non-negative mean");
      v = v > 0.0 ? static_cast<double>(std::poisson_distribution<long long>(v)(rng)) : 0.0;
    }
  }
  t.y = std::move(mean);
  t.validate();
  return t;
}

}  // namespace

Trace ple_scan(const PleParams& params, std::span<const double> grid,
               const std::optional<FineStructure>& sfs, NoiseModel noise, std::uint64_t seed) {
  if (!(params.inhomogeneous_fwhm > 0.0)) throw DomainError("ple: linewidth must be positive");
  std::vector<double> y;
  y.reserve(grid.size());
  for (double f : grid) {
    y.push_back(params.amplitude * unit_lorentzian(f, params.center, params.inhomogeneous_fwhm) +
                params.background);
  }
  if (sfs) {
    // Multiply the line by the relative ion-number fluctuation of one fixed
    // placement; the placement seed is independent of the noise seed.
    const auto counts = sfs_spectrum(sfs->population, sfs->probe_width, grid, 1.0, seed);
    const auto expected = expected_sfs_spectrum(sfs->population, sfs->probe_width, grid, 1.0);
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double rel = expected[i] > 0.0 ? counts[i] / expected[i] : 1.0;
      y[i] = (y[i] - params.background) * rel + params.background;
    }
  }
  return finish(grid, std::move(y), noise, seed + 1);
}

Trace saturation_curve(std::span<const double> powers, double r0, double beta,
                       double background, NoiseModel noise, std::uint64_t seed) {
  if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("saturation: beta must lie in (0, 1]");
  std::vector<double> y;
  y.reserve(powers.size());
  for (double p : powers) {
    if (!(p > 0.0)) throw DomainError("saturation: powers must be positive");
    y.push_back(r0 * std::pow(p, beta) + background);
  }
  return finish(powers, std::move(y), noise, seed);
}

Trace hole_spectrum(const HoleParams& params, std::span<const double> detunings,
                    NoiseModel noise, std::uint64_t seed) {
  if (params.teeth < 1) throw DomainError("hole: need at least one comb tooth");
  if (!(params.hole_fwhm > 0.0 && params.tooth_power > 0.0)) {
    throw DomainError("hole: width and tooth power must be positive");
  }
  const double n = params.teeth;
  const double far = params.r0 * n * std::sqrt(params.tooth_power);
  const double on_hole = params.r0 * std::sqrt(n * params.tooth_power);
  std::vector<double> y;
  y.reserve(detunings.size());
  for (double d : detunings) y.push_back(far - (far - on_hole) * unit_lorentzian(d, 0.0, params.hole_fwhm));
  return finish(detunings, std::move(y), noise, seed);
}

double hole_width_to_homogeneous(double hole_fwhm, double laser_linewidth) {
  if (laser_linewidth < 0.0) throw DomainError("laser linewidth must be >= 0");
  if (hole_fwhm < 2.0 * laser_linewidth) {
    throw DomainError("hole narrower than twice the laser linewidth");
  }
  return 0.5 * hole_fwhm - laser_linewidth;
}

double power_broadening(double power, double alpha1, double gamma0) {
  if (power < 0.0) throw DomainError("power must be >= 0");
  return alpha1 * std::sqrt(power) + gamma0;
}

Trace decay_histogram(double effective_lifetime, std::span<const double> bin_times,
                      double shots, double amplitude, double background, NoiseModel noise,
                      std::uint64_t seed) {
  if (!(effective_lifetime > 0.0)) throw DomainError("decay: lifetime must be positive");
  std::vector<double> y;
  y.reserve(bin_times.size());
  for (double t : bin_times) {
    y.push_back(shots * (amplitude * std::exp(-t / effective_lifetime) + background));
  }
  return finish(bin_times, std::move(y), noise, seed);
}

double cavity_enhanced_lifetime(double free_space_lifetime, double effective) {
  if (!(free_space_lifetime > 0.0) || effective <= -1.0) {
    throw DomainError("invalid lifetime or Purcell factor");
  }
  return free_space_lifetime / (effective + 1.0);
}

std::vector<double> linspace(double first, double last, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = first;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = first + (last - first) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

std::vector<double> logspace(double first, double last, std::size_t n) {
  if (!(first > 0.0 && last > 0.0)) throw DomainError("logspace: bounds must be positive");
  auto exps = linspace(std::log(first), std::log(last), n);
  for (double& e : exps) e = std::exp(e);
  if (n > 1) {
    exps.front() = first;
    exps.back() = last;
  }
  return exps;
}

}  // namespace fpcav
