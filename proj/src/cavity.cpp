#include "fpcav/cavity.hpp"

#include <cmath>
#include <string>

namespace fpcav {

using constants::pi;
using constants::speed_of_light;

LossBudget::LossBudget(double transmission_in, double transmission_out,
                       double absorption_scatter, double particle_scatter)
    : t_in_(transmission_in),
      t_out_(transmission_out),
      absorption_(absorption_scatter),
      particle_(particle_scatter) {
  for (double v : {t_in_, t_out_, absorption_, particle_}) {
    if (!std::isfinite(v) || v < 0.0) throw DomainError("loss budget: entries must be >= 0");
  }
  if (total_ppm() <= 0.0) throw DomainError("loss budget: total loss must be > 0");
}

double free_spectral_range(double cavity_length) {
  if (!(cavity_length > 0.0)) throw DomainError("cavity length must be positive");
  return speed_of_light / (2.0 * cavity_length);
}

double mode_waist(double wavelength, double radius_of_curvature, double cavity_length) {
  if (!(wavelength > 0.0)) throw DomainError("wavelength must be positive");
  if (!(cavity_length > 0.0 && cavity_length < radius_of_curvature)) {
    throw DomainError("unstable geometry: need 0 < cavity_length < radius_of_curvature");
  }
  const double w0_sq =
      wavelength / pi * std::sqrt(cavity_length * (radius_of_curvature - cavity_length));
  return std::sqrt(w0_sq);
}

double resonance_length(double wavelength, int mode_order, double penetration_offset) {
  if (mode_order < 1) throw DomainError("mode order must be >= 1");
  if (!(wavelength > 0.0)) throw DomainError("wavelength must be positive");
  return mode_order * wavelength / 2.0 + penetration_offset;
}

DoubleResonanceSolution double_resonance(double lambda1, double lambda2, int max_order) {
  if (!(lambda1 > 0.0 && lambda2 > lambda1)) {
    throw DomainError("double resonance: need lambda2 > lambda1 > 0");
  }
  const double q_exact = lambda2 / (lambda2 - lambda1);
  const double q_rounded = std::round(q_exact);
  if (q_rounded > max_order) {
    throw NoSolutionError("double resonance: required mode order " +
                          std::to_string(static_cast<long long>(q_rounded)) +
                          " exceeds limit " + std::to_string(max_order));
  }
  const int q = static_cast<int>(q_rounded);
  if (q < 2) throw NoSolutionError("double resonance: no consecutive mode pair");

  DoubleResonanceSolution sol;
  sol.mode_order_1 = q;
  sol.mode_order_2 = q - 1;
  sol.cavity_length = resonance_length(lambda1, q);
  sol.residual_detuning_2 =
      speed_of_light / lambda2 - (q - 1) * free_spectral_range(sol.cavity_length);
  return sol;
}

double finesse(const LossBudget& budget) {
  const double total = budget.total();
  if (!(total > 0.0)) throw DomainError("finesse: zero total loss");
  return 2.0 * pi / total;
}

double cavity_linewidth_kappa(double cavity_length, const LossBudget& budget) {
  return free_spectral_range(cavity_length) / finesse(budget);
}

double np_scattering_loss(double diameter, double wavelength, const ScatteringModel& model) {
  if (diameter < 0.0) throw DomainError("particle diameter must be >= 0");
  if (!(wavelength > 0.0)) throw DomainError("wavelength must be positive");
  const double size = diameter / model.reference_diameter;
  return model.reference_loss_ppm * std::pow(size, 6) *
         std::pow(wavelength / model.reference_wavelength, model.wavelength_exponent);
}

double diameter_from_loss(double loss_ppm, double wavelength, const ScatteringModel& model) {
  if (!(loss_ppm > 0.0)) throw DomainError("scattering loss must be positive");
  if (!(wavelength > 0.0)) throw DomainError("wavelength must be positive");
  const double at_reference =
      loss_ppm / std::pow(wavelength / model.reference_wavelength, model.wavelength_exponent);
  return model.reference_diameter * std::pow(at_reference / model.reference_loss_ppm, 1.0 / 6.0);
}

double outcoupling_efficiency(double transmission_out_ppm, const LossBudget& budget) {
  if (transmission_out_ppm < 0.0 || transmission_out_ppm > budget.total_ppm() * (1.0 + 1e-12)) {
    throw DomainError("outcoupling transmission must be part of the loss budget");
  }
  return transmission_out_ppm / budget.total_ppm();
}

double lorentzian_suppression(double detuning_in_hwhm) noexcept {
  return 1.0 / (1.0 + detuning_in_hwhm * detuning_in_hwhm);
}

}  // namespace fpcav
