#pragma once

// Single-emitter cavity coupling figures: nominal, effective and multimodal
// Purcell factors, length-jitter degradation, coupling rate g, cooperativity
// and the single-ion saturation intensity.

#include <span>
#include <string>

#include "fpcav/units.hpp"

namespace fpcav {

/// Multiplicative factors that reduce a nominal Purcell factor.
class CouplingDegradation {
 public:
  CouplingDegradation() = default;
  CouplingDegradation(double jitter_factor, double bad_emitter_factor,
                      double orientation_factor, double position_factor);

  [[nodiscard]] double jitter_factor() const noexcept { return jitter_; }
  /// kappa / (kappa + Gamma_h); filled in by effective_purcell.
  [[nodiscard]] double bad_emitter_factor() const noexcept { return bad_emitter_; }
  [[nodiscard]] double orientation_factor() const noexcept { return orientation_; }
  [[nodiscard]] double position_factor() const noexcept { return position_; }

  [[nodiscard]] double product() const noexcept {
    return jitter_ * bad_emitter_ * orientation_ * position_;
  }

 private:
  double jitter_ = 1.0;
  double bad_emitter_ = 1.0;
  double orientation_ = 1.0;
  double position_ = 1.0;
};

/// Table-1-shaped summary for one transition. Rates are ordinary
/// frequencies (a table entry "2 pi x X" stores X).
struct CouplingReport {
  double wavelength = 0.0;
  double nominal_purcell = 0.0;
  double effective_purcell = 0.0;
  double coupling_rate_g = 0.0;
  double cavity_linewidth = 0.0;
  double homogeneous_linewidth = 0.0;
  double cooperativity = 0.0;
  double cavity_branching = 0.0;
};

struct LifetimePurcell {
  double effective_purcell = 0.0;
  /// Set when the cavity lifetime exceeds the free-space one.
  bool suppressed = false;
  std::string warning;
};

/// (6/pi^3) (lambda/n)^2 F / w0^2.
[[nodiscard]] double nominal_purcell(double wavelength, double refractive_index,
                                     double finesse, double waist);

/// Average of the Lorentzian resonance factor over Gaussian cavity-length
/// noise of rms `rms_jitter`; the resonance HWHM in length is lambda/(4F).
[[nodiscard]] double jitter_suppression(double rms_jitter, double wavelength, double finesse);

/// kappa / (kappa + Gamma_h), both FWHM.
[[nodiscard]] double bad_emitter_factor(double kappa, double homogeneous_linewidth);

/// zeta F_P [kappa/(kappa+Gamma_h)] * jitter * orientation * position.
/// The bad-emitter entry of `degradation` is ignored and recomputed.
[[nodiscard]] double effective_purcell(const Transition& transition, double nominal,
                                       double kappa, const CouplingDegradation& degradation);

/// Factors of non-overlapping decay channels add linearly.
[[nodiscard]] double multimodal_sum(std::span<const double> factors);

/// T1/T1c - 1.
[[nodiscard]] LifetimePurcell purcell_from_lifetimes(double free_space_lifetime,
                                                     double cavity_lifetime);

[[nodiscard]] double ideal_purcell_from_effective(double effective, double branching_ratio);

/// Branching ratio into the enhanced transition, (F_eff + zeta)/(F_eff + 1).
[[nodiscard]] double cavity_branching(double effective, double branching_ratio);

/// g from g^2 = F_eff gamma (kappa + Gamma_h)/4 with angular rates and
/// gamma = 1/T1; returned as ordinary frequency.
[[nodiscard]] double coupling_rate_g(double effective, double kappa,
                                     double homogeneous_linewidth, double free_space_lifetime);

/// 4 g^2 / ((kappa + Gamma_h) Gamma_h). Scale-free, so the 2 pi factors cancel.
[[nodiscard]] double cooperativity(double g, double kappa, double homogeneous_linewidth);

/// I_sat = (4 pi^3/3) hbar c Gamma_h / (zeta lambda^3), Gamma_h angular. W/m^2.
[[nodiscard]] double saturation_intensity(double homogeneous_linewidth, double branching_ratio,
                                          double wavelength);

/// Power through the effective mode area pi w0^2 / 2.
[[nodiscard]] double saturation_power(double intensity, double waist);

[[nodiscard]] CouplingReport make_coupling_report(const Transition& transition,
                                                  double nominal, double kappa,
                                                  const CouplingDegradation& degradation);

}  // namespace fpcav
