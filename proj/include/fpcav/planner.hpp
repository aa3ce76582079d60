#pragma once

// Single-ion detection planning: pulsed emission into the cavity mode,
// detected count rate, dark-count-limited SNR, and sweeps over particle size
// and repetition rate for the three cavity operating modes.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fpcav/cavity.hpp"
#include "fpcav/purcell.hpp"

namespace fpcav {

class DetectionChain {
 public:
  DetectionChain(double path_transmission, double detector_efficiency, double dark_rate);

  [[nodiscard]] double path_transmission() const noexcept { return path_; }
  [[nodiscard]] double detector_efficiency() const noexcept { return detector_; }
  [[nodiscard]] double dark_rate() const noexcept { return dark_; }

 private:
  double path_;
  double detector_;
  double dark_;
};

class PulseScheme {
 public:
  PulseScheme(double excitation_time, double detection_time, double excited_population);

  /// Detection window filling the rest of a period of 1/f_rep.
  [[nodiscard]] static PulseScheme from_repetition_rate(double repetition_rate,
                                                        double excitation_time,
                                                        double excited_population);

  [[nodiscard]] double excitation_time() const noexcept { return t_ex_; }
  [[nodiscard]] double detection_time() const noexcept { return t_det_; }
  [[nodiscard]] double excited_population() const noexcept { return p_ex_; }
  [[nodiscard]] double repetition_rate() const noexcept { return 1.0 / (t_ex_ + t_det_); }

 private:
  double t_ex_;
  double t_det_;
  double p_ex_;
};

/// Photons per second into the cavity mode of one channel when the excited
/// state decays at (F_total + 1)/T1:
///   p_ex f_rep F_channel/(F_total+1) (1 - exp(-(F_total+1) t_det / T1)).
[[nodiscard]] double pulsed_rate(const PulseScheme& scheme, double channel_purcell,
                                 double total_purcell, double free_space_lifetime);

/// Single-channel form with F_channel = F_total = F_eff.
[[nodiscard]] double pulsed_rate(const PulseScheme& scheme, double effective_purcell,
                                 double free_space_lifetime);

/// R_pulsed eta_out T_path eta_det.
[[nodiscard]] double detected_rate(double pulsed, double outcoupling,
                                   const DetectionChain& chain);

/// signal t / sqrt(dark t).
[[nodiscard]] double snr(double signal_rate, double dark_rate, double integration_time = 1.0);

enum class OperatingMode { contact, open_single, open_double };

[[nodiscard]] std::string_view to_string(OperatingMode mode);
/// Throws std::invalid_argument for unknown names.
[[nodiscard]] OperatingMode parse_operating_mode(std::string_view name);

/// Transition plus its per-wavelength bare loss budget.
struct PlannerChannel {
  Transition transition;
  LossBudget bare_budget;
};

struct ModeSettings {
  double cavity_length = 0.0;
  double rms_jitter = 0.0;
};

struct PlannerConfig {
  double radius_of_curvature = 25e-6;
  double refractive_index = 1.0;
  PlannerChannel primary;    // collected in every mode (580 nm)
  PlannerChannel secondary;  // enhanced and collected in open_double only (611 nm)
  ModeSettings contact;
  ModeSettings open;
  ScatteringModel scattering;
  DetectionChain chain{0.8, 0.65, 20.0};
  double excitation_time = 1e-6;
  double excited_population = 0.5;
};

/// Cavity figures of one channel for a given particle and mode.
struct ChannelFigures {
  double waist = 0.0;
  double finesse = 0.0;
  double kappa = 0.0;
  double nominal_purcell = 0.0;
  double jitter_factor = 1.0;
  double effective_purcell = 0.0;
  double outcoupling = 0.0;
};

[[nodiscard]] ChannelFigures channel_figures(const PlannerConfig& config,
                                             const PlannerChannel& channel,
                                             const ModeSettings& mode, double particle_diameter);

struct SweepRow {
  double particle_diameter = 0.0;
  double repetition_rate = 0.0;
  OperatingMode mode = OperatingMode::contact;
  double effective_purcell = 0.0;  // summed over enhanced channels
  double pulsed_rate = 0.0;        // photons/s into the collected modes
  double rate = 0.0;               // detected counts/s
  double snr = 0.0;
};

/// Detected rate for one (particle, repetition rate, mode) point.
[[nodiscard]] SweepRow plan_point(const PlannerConfig& config, double particle_diameter,
                                  double repetition_rate, OperatingMode mode);

/// Row-major over (diameter, repetition rate). Evaluated in parallel; the
/// result does not depend on the thread count.
[[nodiscard]] std::vector<SweepRow> sweep_grid(const PlannerConfig& config,
                                               std::span<const double> particle_diameters,
                                               std::span<const double> repetition_rates,
                                               OperatingMode mode, unsigned threads = 0);

/// Row with the highest detected rate; ties go to the lower repetition rate.
/// Throws DomainError on an empty table or one without any signal.
[[nodiscard]] SweepRow best_operating_point(std::span<const SweepRow> table);

}  // namespace fpcav
