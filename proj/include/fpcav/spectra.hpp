#pragma once

// Forward models for the measured curves: PLE scan of the inhomogeneous
// line, power-law saturation curve, transient spectral hole, power
// broadening and decay histograms.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fpcav/ensemble.hpp"

namespace fpcav {

enum class NoiseModel { none, poisson };

/// Sampled curve. x is strictly increasing (frequency, power or time).
struct Trace {
  std::vector<double> x;
  std::vector<double> y;
  NoiseModel noise = NoiseModel::none;
  std::uint64_t seed = 0;

  [[nodiscard]] std::size_t size() const noexcept { return x.size(); }
  /// Throws DomainError on length mismatch or non-increasing x.
  void validate() const;
};

/// Unit-peak Lorentzian 1 / (1 + (2 (x - center) / fwhm)^2).
[[nodiscard]] double unit_lorentzian(double x, double center, double fwhm) noexcept;

struct PleParams {
  double inhomogeneous_fwhm = 34e9;
  double center = 0.0;
  double amplitude = 1.0;
  double background = 0.0;
};

/// Optional statistical fine structure multiplied onto a PLE scan.
struct FineStructure {
  SpectralPopulation population;
  double probe_width = 0.0;
};

[[nodiscard]] Trace ple_scan(const PleParams& params, std::span<const double> grid,
                             const std::optional<FineStructure>& sfs = std::nullopt,
                             NoiseModel noise = NoiseModel::none, std::uint64_t seed = 0);

/// R0 P^beta + background.
[[nodiscard]] Trace saturation_curve(std::span<const double> powers, double r0, double beta,
                                     double background = 0.0,
                                     NoiseModel noise = NoiseModel::none, std::uint64_t seed = 0);

struct HoleParams {
  int teeth = 2;
  double tooth_power = 1.0;
  double hole_fwhm = 1.0;
  double r0 = 1.0;
};

/// Count rate vs comb-tooth spacing: R0 sqrt(N P) on the hole, R0 N sqrt(P)
/// far from it, joined by an inverted unit-peak Lorentzian.
[[nodiscard]] Trace hole_spectrum(const HoleParams& params, std::span<const double> detunings,
                                  NoiseModel noise = NoiseModel::none, std::uint64_t seed = 0);

/// 0.5 Gamma_hole - Gamma_laser. Throws if the result would be negative.
[[nodiscard]] double hole_width_to_homogeneous(double hole_fwhm, double laser_linewidth);

/// alpha1 sqrt(P) + Gamma0.
[[nodiscard]] double power_broadening(double power, double alpha1, double gamma0);

/// Expected counts per bin: shots * (amplitude exp(-t / T1_eff) + background).
[[nodiscard]] Trace decay_histogram(double effective_lifetime, std::span<const double> bin_times,
                                    double shots, double amplitude, double background,
                                    NoiseModel noise = NoiseModel::poisson,
                                    std::uint64_t seed = 0);

/// T1 / (F_eff + 1).
[[nodiscard]] double cavity_enhanced_lifetime(double free_space_lifetime, double effective);

/// n points, linear spacing, both ends included.
[[nodiscard]] std::vector<double> linspace(double first, double last, std::size_t n);
/// n points, logarithmic spacing, both ends included.
[[nodiscard]] std::vector<double> logspace(double first, double last, std::size_t n);

}  // namespace fpcav
