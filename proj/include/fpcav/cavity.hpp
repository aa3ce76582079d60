#pragma once

// Gaussian-resonator geometry, resonance conditions, loss budget and
// scattering-based particle sizing for a plano-concave microcavity.

#include <stdexcept>

#include "fpcav/units.hpp"

namespace fpcav {

/// Round-trip loss budget of one cavity resonance, all entries in ppm.
class LossBudget {
 public:
  LossBudget(double transmission_in, double transmission_out,
             double absorption_scatter, double particle_scatter = 0.0);

  [[nodiscard]] double transmission_in() const noexcept { return t_in_; }
  [[nodiscard]] double transmission_out() const noexcept { return t_out_; }
  [[nodiscard]] double absorption_scatter() const noexcept { return absorption_; }
  [[nodiscard]] double particle_scatter() const noexcept { return particle_; }

  [[nodiscard]] double total_ppm() const noexcept {
    return t_in_ + t_out_ + absorption_ + particle_;
  }
  /// Total round-trip loss as a fraction.
  [[nodiscard]] double total() const noexcept { return total_ppm() * ppm; }

  [[nodiscard]] LossBudget with_particle_scatter(double s_ppm) const {
    return {t_in_, t_out_, absorption_, s_ppm};
  }

  friend bool operator==(const LossBudget&, const LossBudget&) = default;

 private:
  double t_in_;
  double t_out_;
  double absorption_;
  double particle_;
};

struct DoubleResonanceSolution {
  int mode_order_1 = 0;
  int mode_order_2 = 0;
  double cavity_length = 0.0;
  /// c/lambda2 minus the frequency of mode (q-1) at the returned length.
  double residual_detuning_2 = 0.0;
};

class NoSolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rayleigh-type scaling of nanoparticle scattering loss, anchored at a
/// reference particle: S = S_ref (d/d_ref)^6 (lambda/lambda_ref)^exponent.
struct ScatteringModel {
  double reference_loss_ppm = 13.0;
  double reference_diameter = 60e-9;
  double reference_wavelength = 580.8e-9;
  double wavelength_exponent = -4.0;
};

[[nodiscard]] double free_spectral_range(double cavity_length);

/// Waist at the planar mirror, w0^2 = (lambda/pi) sqrt(d (R - d)).
[[nodiscard]] double mode_waist(double wavelength, double radius_of_curvature,
                                double cavity_length);

/// q lambda / 2 plus an optional mirror penetration offset.
[[nodiscard]] double resonance_length(double wavelength, int mode_order,
                                      double penetration_offset = 0.0);

/// Cavity length where mode q sits exactly on lambda1 and mode q-1 is the
/// one closest to lambda2. Throws NoSolutionError if q exceeds max_order.
[[nodiscard]] DoubleResonanceSolution double_resonance(double lambda1, double lambda2,
                                                       int max_order);

/// 2 pi / total round-trip loss.
[[nodiscard]] double finesse(const LossBudget& budget);

/// FWHM cavity linewidth FSR/F as ordinary frequency.
[[nodiscard]] double cavity_linewidth_kappa(double cavity_length, const LossBudget& budget);

[[nodiscard]] double np_scattering_loss(double diameter, double wavelength,
                                        const ScatteringModel& model = {});

/// Exact inverse of np_scattering_loss in the diameter.
[[nodiscard]] double diameter_from_loss(double loss_ppm, double wavelength,
                                        const ScatteringModel& model = {});

[[nodiscard]] double outcoupling_efficiency(double transmission_out_ppm,
                                            const LossBudget& budget);

/// 1/(1+x^2), x being the detuning in units of the cavity HWHM.
[[nodiscard]] double lorentzian_suppression(double detuning_in_hwhm) noexcept;

}  // namespace fpcav
