#include "fpcav/units.hpp"

#include <cmath>

namespace fpcav {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

double wavelength_to_frequency(double wavelength) {
  require(wavelength > 0.0, "wavelength must be positive");
  return constants::speed_of_light / wavelength;
}

double linewidth_to_coherence_time(double fwhm) {
  require(fwhm > 0.0, "linewidth must be positive");
  return 1.0 / (constants::pi * fwhm);
}

Transition::Transition(double wavelength, double branching_ratio,
                       double homogeneous_linewidth, double free_space_lifetime)
    : wavelength_(wavelength),
      branching_ratio_(branching_ratio),
      linewidth_(homogeneous_linewidth),
      lifetime_(free_space_lifetime) {
  require(finite_positive(wavelength), "transition: wavelength must be > 0");
  require(branching_ratio > 0.0 && branching_ratio <= 1.0,
          "transition: branching_ratio must lie in (0, 1]");
  require(finite_positive(free_space_lifetime),
          "transition: free_space_lifetime must be > 0");
  // Lifetime-limited floor; the relative slack absorbs round-off when the
  // linewidth is computed from the lifetime itself.
  const double floor = 1.0 / (2.0 * constants::pi * free_space_lifetime);
  require(std::isfinite(homogeneous_linewidth) &&
              homogeneous_linewidth >= floor * (1.0 - 1e-12),
          "transition: homogeneous_linewidth below lifetime limit 1/(2 pi T1)");
}

MirrorSpec::MirrorSpec(double transmission_ppm, double absorption_scatter_loss_ppm)
    : transmission_(transmission_ppm), loss_(absorption_scatter_loss_ppm) {
  require(std::isfinite(transmission_ppm) && transmission_ppm >= 0.0,
          "mirror: transmission must be >= 0");
  require(std::isfinite(absorption_scatter_loss_ppm) && absorption_scatter_loss_ppm >= 0.0,
          "mirror: absorption_scatter_loss must be >= 0");
}

CavityGeometry::CavityGeometry(double radius_of_curvature, double cavity_length,
                               int mode_order, double rms_length_jitter)
    : radius_(radius_of_curvature),
      length_(cavity_length),
      mode_order_(mode_order),
      jitter_(rms_length_jitter) {
  require(finite_positive(cavity_length), "cavity: cavity_length must be > 0");
  require(std::isfinite(radius_of_curvature) && cavity_length < radius_of_curvature,
          "cavity: unstable geometry, need 0 < cavity_length < radius_of_curvature");
  require(mode_order >= 1, "cavity: mode_order must be >= 1");
  require(std::isfinite(rms_length_jitter) && rms_length_jitter >= 0.0,
          "cavity: rms_length_jitter must be >= 0");
}

Nanoparticle::Nanoparticle(double diameter, double dopant_concentration,
                           double cation_density, double refractive_index)
    : diameter_(diameter),
      doping_(dopant_concentration),
      cation_density_(cation_density),
      index_(refractive_index) {
  require(finite_positive(diameter), "nanoparticle: diameter must be > 0");
  require(finite_positive(dopant_concentration) && dopant_concentration < 1.0,
          "nanoparticle: dopant_concentration must lie in (0, 1)");
  require(finite_positive(cation_density), "nanoparticle: cation_density must be > 0");
  require(finite_positive(refractive_index), "nanoparticle: refractive_index must be > 0");
}

}  // namespace fpcav
