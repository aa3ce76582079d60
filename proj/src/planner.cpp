#include "fpcav/planner.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fpcav/parallel.hpp"

namespace fpcav {

namespace {

bool unit_interval(double v) { return std::isfinite(v) && v > 0.0 && v <= 1.0; }

}  // namespace

DetectionChain::DetectionChain(double path_transmission, double detector_efficiency,
                               double dark_rate)
    : path_(path_transmission), detector_(detector_efficiency), dark_(dark_rate) {
  if (!unit_interval(path_)) throw DomainError("detection: path_transmission must lie in (0, 1]");
  if (!unit_interval(detector_)) {
    throw DomainError("detection: detector_efficiency must lie in (0, 1]");
  }
  if (!(std::isfinite(dark_) && dark_ >= 0.0)) throw DomainError("detection: dark_rate must be >= 0");
}

PulseScheme::PulseScheme(double excitation_time, double detection_time,
                         double excited_population)
    : t_ex_(excitation_time), t_det_(detection_time), p_ex_(excited_population) {
  if (!(t_ex_ > 0.0 && t_det_ > 0.0)) throw DomainError("pulse: times must be positive");
  if (!unit_interval(p_ex_)) throw DomainError("pulse: excited_population must lie in (0, 1]");
}

PulseScheme PulseScheme::from_repetition_rate(double repetition_rate, double excitation_time,
                                              double excited_population) {
  if (!(repetition_rate > 0.0)) throw DomainError("pulse: repetition rate must be positive");
  const double period = 1.0 / repetition_rate;
  if (!(period > excitation_time)) {
    throw DomainError("pulse: repetition period shorter than the excitation pulse");
  }
  return {excitation_time, period - excitation_time, excited_population};
}

double pulsed_rate(const PulseScheme& scheme, double channel_purcell, double total_purcell,
                   double free_space_lifetime) {
  if (channel_purcell < 0.0 || total_purcell < channel_purcell) {
    throw DomainError("pulsed_rate: need 0 <= channel Purcell <= total Purcell");
  }
  if (!(free_space_lifetime > 0.0)) throw DomainError("pulsed_rate: lifetime must be positive");
  const double decay = (total_purcell + 1.0) / free_space_lifetime;
  return scheme.excited_population() * scheme.repetition_rate() * channel_purcell /
         (total_purcell + 1.0) * -std::expm1(-decay * scheme.detection_time());
}

double pulsed_rate(const PulseScheme& scheme, double effective_purcell,
                   double free_space_lifetime) {
  return pulsed_rate(scheme, effective_purcell, effective_purcell, free_space_lifetime);
}

double detected_rate(double pulsed, double outcoupling, const DetectionChain& chain) {
  if (pulsed < 0.0) throw DomainError("detected_rate: negative emission rate");
  if (!(outcoupling >= 0.0 && outcoupling <= 1.0)) {
    throw DomainError("detected_rate: outcoupling must lie in [0, 1]");
  }
  return pulsed * outcoupling * chain.path_transmission() * chain.detector_efficiency();
}

double snr(double signal_rate, double dark_rate, double integration_time) {
  if (signal_rate < 0.0 || dark_rate < 0.0) throw DomainError("snr: rates must be >= 0");
  if (!(integration_time > 0.0)) throw DomainError("snr: integration time must be positive");
  if (signal_rate == 0.0) return 0.0;
  if (dark_rate == 0.0) return std::numeric_limits<double>::infinity();
  return signal_rate * integration_time / std::sqrt(dark_rate * integration_time);
}

std::string_view to_string(OperatingMode mode) {
  switch (mode) {
    case OperatingMode::contact:
      return "contact";
    case OperatingMode::open_single:
      return "open_single";
    case OperatingMode::open_double:
      return "open_double";
  }
  return "?";
}

OperatingMode parse_operating_mode(std::string_view name) {
  if (name == "contact") return OperatingMode::contact;
  if (name == "open_single") return OperatingMode::open_single;
  if (name == "open_double") return OperatingMode::open_double;
  throw std::invalid_argument("unknown operating mode '" + std::string(name) + "'");
}

ChannelFigures channel_figures(const PlannerConfig& config, const PlannerChannel& channel,
                               const ModeSettings& mode, double particle_diameter) {
  const double lambda = channel.transition.wavelength();
  ChannelFigures f;
  const LossBudget budget = channel.bare_budget.with_particle_scatter(
      np_scattering_loss(particle_diameter, lambda, config.scattering));
  f.waist = mode_waist(lambda, config.radius_of_curvature, mode.cavity_length);
  f.finesse = finesse(budget);
  f.kappa = cavity_linewidth_kappa(mode.cavity_length, budget);
  f.nominal_purcell = nominal_purcell(lambda, config.refractive_index, f.finesse, f.waist);
  f.jitter_factor = jitter_suppression(mode.rms_jitter, lambda, f.finesse);
  f.effective_purcell = effective_purcell(channel.transition, f.nominal_purcell, f.kappa,
                                          CouplingDegradation(f.jitter_factor, 1.0, 1.0, 1.0));
  f.outcoupling = outcoupling_efficiency(budget.transmission_out(), budget);
  return f;
}

SweepRow plan_point(const PlannerConfig& config, double particle_diameter,
                    double repetition_rate, OperatingMode mode) {
  const auto scheme = PulseScheme::from_repetition_rate(
      repetition_rate, config.excitation_time, config.excited_population);
  const double t1 = config.primary.transition.free_space_lifetime();

  SweepRow row;
  row.particle_diameter = particle_diameter;
  row.repetition_rate = repetition_rate;
  row.mode = mode;

  const ModeSettings& settings = mode == OperatingMode::contact ? config.contact : config.open;
  const auto primary = channel_figures(config, config.primary, settings, particle_diameter);
  if (mode == OperatingMode::open_double) {
    const auto secondary = channel_figures(config, config.secondary, settings, particle_diameter);
    const double total = primary.effective_purcell + secondary.effective_purcell;
    const double r1 = pulsed_rate(scheme, primary.effective_purcell, total, t1);
    const double r2 = pulsed_rate(scheme, secondary.effective_purcell, total, t1);
    row.effective_purcell = total;
    row.pulsed_rate = r1 + r2;
    row.rate = detected_rate(r1, primary.outcoupling, config.chain) +
               detected_rate(r2, secondary.outcoupling, config.chain);
  } else {
    row.effective_purcell = primary.effective_purcell;
    row.pulsed_rate = pulsed_rate(scheme, primary.effective_purcell, t1);
    row.rate = detected_rate(row.pulsed_rate, primary.outcoupling, config.chain);
  }
  row.snr = snr(row.rate, config.chain.dark_rate());
  return row;
}

std::vector<SweepRow> sweep_grid(const PlannerConfig& config,
                                 std::span<const double> particle_diameters,
                                 std::span<const double> repetition_rates, OperatingMode mode,
                                 unsigned threads) {
  if (particle_diameters.empty() || repetition_rates.empty()) {
    throw DomainError("sweep: empty parameter range");
  }
  const std::size_t cols = repetition_rates.size();
  std::vector<SweepRow> rows(particle_diameters.size() * cols);
  for_each_block(particle_diameters.size(), threads, [&](std::size_t i) {
    for (std::size_t j = 0; j < cols; ++j) {
      rows[i * cols + j] = plan_point(config, particle_diameters[i], repetition_rates[j], mode);
    }
  });
  return rows;
}

SweepRow best_operating_point(std::span<const SweepRow> table) {
  if (table.empty()) throw DomainError("best_operating_point: empty table");
  const SweepRow* best = &table.front();
  for (const auto& row : table) {
    if (row.rate > best->rate ||
        (row.rate == best->rate && row.repetition_rate < best->repetition_rate)) {
      best = &row;
    }
  }
  if (!(best->rate > 0.0)) throw DomainError("best_operating_point: no signal anywhere in the table");
  return *best;
}

}  // namespace fpcav
