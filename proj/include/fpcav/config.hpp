#pragma once

// Run configuration: one JSON document holding every physical and numerical
// input of a run. The bundled default describes the reference setup.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fpcav/cavity.hpp"
#include "fpcav/ensemble.hpp"
#include "fpcav/planner.hpp"
#include "fpcav/serialize.hpp"

namespace fpcav {

inline constexpr int kSchemaVersion = 1;

/// One decay channel with the two mirrors as seen at its wavelength.
struct ChannelConfig {
  Transition transition;
  MirrorSpec input;
  MirrorSpec output;

  /// Bare budget: both transmissions plus the summed mirror losses.
  [[nodiscard]] LossBudget bare_budget() const;
};

struct CavitySettings {
  double radius_of_curvature = 25e-6;
  double refractive_index = 1.0;
  int max_mode_order = 100;
  /// Measured rms length jitter used for coupling estimates.
  double rms_length_jitter = 8e-12;
};

struct EnsembleSettings {
  std::uint64_t samples = 100000;
  double penetration_fraction = 0.1;
};

/// Inputs of the best-case coupling table.
struct TableSettings {
  double nanoparticle_diameter = 70e-9;
  bool include_jitter = false;
};

/// Spectral population and probe of the ion-count estimate.
struct IonSettings {
  double inhomogeneous_fwhm = 34e9;
  double probe_power = 50e-9;
  std::uint64_t draws = 4000;
  std::vector<IsotopeLines> isotopes;
};

struct PleSettings {
  double span = 200e9;
  std::size_t points = 401;
  double amplitude = 1000.0;
  double background = 20.0;
  bool fine_structure = true;
  bool poisson = true;
};

struct SaturationSettings {
  double r0 = 105.0;
  double beta = 0.38;
  double background = 0.0;
  double power_min = 0.05;
  double power_max = 20.0;
  std::size_t points = 25;
  bool poisson = true;
};

struct HoleSettings {
  int teeth = 4;
  double tooth_power = 1.0;
  double hole_fwhm = 6.6e6;
  double r0 = 100.0;
  double span = 40e6;
  std::size_t points = 201;
  bool poisson = true;
};

struct DecaySettings {
  double effective_purcell = 0.82;
  double shots = 1e4;
  double amplitude = 1.0;
  double background = 1e-3;
  double time_max = 10e-3;
  std::size_t bins = 200;
  bool poisson = true;
};

struct SweepSettings {
  double diameter_min = 20e-9;
  double diameter_max = 100e-9;
  std::size_t diameter_points = 17;
  double repetition_min = 1e3;
  double repetition_max = 4e5;
  std::size_t repetition_points = 261;
  std::vector<OperatingMode> modes{OperatingMode::contact, OperatingMode::open_single,
                                   OperatingMode::open_double};
};

struct RunConfig {
  int schema_version = kSchemaVersion;
  std::uint64_t seed = 0;
  CavitySettings cavity;
  ChannelConfig primary;
  ChannelConfig secondary;
  Nanoparticle nanoparticle;
  ScatteringModel scattering;
  EnsembleSettings ensemble;
  TableSettings table;
  IonSettings ions;
  PleSettings ple;
  SaturationSettings saturation;
  HoleSettings hole;
  DecaySettings decay;
  DetectionChain detection;
  double excitation_time = 1e-6;
  double excited_population = 0.5;
  ModeSettings contact;
  /// cavity_length 0 means the double-resonance length.
  ModeSettings open;
  SweepSettings sweep;
};

/// Parses and validates; throws ConfigError with the offending field path.
[[nodiscard]] RunConfig parse_config(const json& document);
[[nodiscard]] json config_to_json(const RunConfig& config);

/// Bundled reference configuration as JSON text.
[[nodiscard]] const std::string& default_config_text();
[[nodiscard]] RunConfig default_config();

/// Reads a JSON file; I/O and syntax problems raise ConfigError.
[[nodiscard]] json load_config_document(const std::string& path);

/// Double-resonance solution of the two configured wavelengths.
[[nodiscard]] DoubleResonanceSolution open_resonance(const RunConfig& config);
/// Open-mode settings with the length resolved.
[[nodiscard]] ModeSettings resolved_open_mode(const RunConfig& config);
[[nodiscard]] PlannerConfig planner_config(const RunConfig& config);
/// Population of the configured nanoparticle at the primary wavelength.
[[nodiscard]] SpectralPopulation spectral_population(const RunConfig& config);

}  // namespace fpcav
