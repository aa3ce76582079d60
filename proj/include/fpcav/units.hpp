#pragma once

// Shared physical types and unit conventions.
//
// Conventions used throughout the library:
//   * SI base units everywhere (m, s, Hz, W).
//   * Every stored linewidth is an ordinary-frequency FWHM in Hz. Formulas
//     that need angular rates convert with to_angular() at the point of use.
//   * Mirror transmissions and losses are stored in ppm.

#include <numbers>
#include <stdexcept>
#include <string>

namespace fpcav {

namespace constants {
inline constexpr double speed_of_light = 299'792'458.0;   // m/s, exact
inline constexpr double hbar = 1.054'571'817e-34;         // J s
inline constexpr double pi = std::numbers::pi;
/// Y2O3 cation density used for ion-count estimates unless configured.
inline constexpr double y2o3_cation_density = 5.34e28;    // m^-3
}  // namespace constants

inline constexpr double ppm = 1e-6;

/// Raised when an argument is outside the domain of a formula or a type
/// invariant is violated.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

[[nodiscard]] constexpr double to_angular(double hz) noexcept {
  return 2.0 * constants::pi * hz;
}
[[nodiscard]] constexpr double to_ordinary(double rad_per_s) noexcept {
  return rad_per_s / (2.0 * constants::pi);
}

[[nodiscard]] double wavelength_to_frequency(double wavelength);

/// T2* = 1 / (pi * FWHM).
[[nodiscard]] double linewidth_to_coherence_time(double fwhm);

/// One spontaneous decay channel of the emitter.
class Transition {
 public:
  Transition(double wavelength, double branching_ratio,
             double homogeneous_linewidth, double free_space_lifetime);

  [[nodiscard]] double wavelength() const noexcept { return wavelength_; }
  [[nodiscard]] double branching_ratio() const noexcept { return branching_ratio_; }
  [[nodiscard]] double homogeneous_linewidth() const noexcept { return linewidth_; }
  [[nodiscard]] double free_space_lifetime() const noexcept { return lifetime_; }

  friend bool operator==(const Transition&, const Transition&) = default;

 private:
  double wavelength_;
  double branching_ratio_;
  double linewidth_;
  double lifetime_;
};

class MirrorSpec {
 public:
  MirrorSpec(double transmission_ppm, double absorption_scatter_loss_ppm);

  [[nodiscard]] double transmission() const noexcept { return transmission_; }
  [[nodiscard]] double absorption_scatter_loss() const noexcept { return loss_; }

  friend bool operator==(const MirrorSpec&, const MirrorSpec&) = default;

 private:
  double transmission_;
  double loss_;
};

/// Plano-concave resonator: curved fiber mirror facing a planar mirror.
class CavityGeometry {
 public:
  CavityGeometry(double radius_of_curvature, double cavity_length,
                 int mode_order, double rms_length_jitter);

  [[nodiscard]] double radius_of_curvature() const noexcept { return radius_; }
  [[nodiscard]] double cavity_length() const noexcept { return length_; }
  [[nodiscard]] int mode_order() const noexcept { return mode_order_; }
  [[nodiscard]] double rms_length_jitter() const noexcept { return jitter_; }

  friend bool operator==(const CavityGeometry&, const CavityGeometry&) = default;

 private:
  double radius_;
  double length_;
  int mode_order_;
  double jitter_;
};

class Nanoparticle {
 public:
  Nanoparticle(double diameter, double dopant_concentration,
               double cation_density = constants::y2o3_cation_density,
               double refractive_index = 1.93);

  [[nodiscard]] double diameter() const noexcept { return diameter_; }
  [[nodiscard]] double dopant_concentration() const noexcept { return doping_; }
  [[nodiscard]] double cation_density() const noexcept { return cation_density_; }
  [[nodiscard]] double refractive_index() const noexcept { return index_; }

  [[nodiscard]] Nanoparticle with_diameter(double d) const {
    return {d, doping_, cation_density_, index_};
  }

  friend bool operator==(const Nanoparticle&, const Nanoparticle&) = default;

 private:
  double diameter_;
  double doping_;
  double cation_density_;
  double index_;
};

}  // namespace fpcav
