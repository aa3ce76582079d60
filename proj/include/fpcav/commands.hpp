#pragma once

// Report builders behind the command-line subcommands. Each takes a
// validated RunConfig and returns plain data; I/O stays with the caller.

#include <optional>
#include <string>
#include <vector>

#include "fpcav/config.hpp"
#include "fpcav/fit.hpp"
#include "fpcav/spectra.hpp"

namespace fpcav {

/// Waists, FSR, finesse and linewidths for both channels in both modes,
/// plus the double-resonance solution.
[[nodiscard]] json cavity_report(const RunConfig& config);

/// Best-case table rows for the configured table particle.
[[nodiscard]] std::vector<CouplingReport> coupling_table(const RunConfig& config);

/// Coupled channels for a particle in the open double-resonance cavity with
/// the measured jitter.
[[nodiscard]] std::vector<ChannelCoupling> open_channels(const RunConfig& config,
                                                         double particle_diameter);

/// Power-broadened probe width used for the ion-count estimate.
[[nodiscard]] double ion_probe_width(const RunConfig& config);

/// Table, ensemble statistics, saturation figures and ion count.
[[nodiscard]] json purcell_report(const RunConfig& config, unsigned threads = 0);

enum class SimulationKind { ple, saturation, hole, decay };
[[nodiscard]] SimulationKind parse_simulation_kind(std::string_view name);
[[nodiscard]] std::string_view to_string(SimulationKind kind);

struct Simulation {
  Trace trace;
  /// Generator inputs, written as the CSV sidecar.
  json metadata;
};

[[nodiscard]] Simulation simulate(const RunConfig& config, SimulationKind kind);

struct PlanResult {
  std::vector<SweepRow> rows;
  json report;
};

/// Sweeps every configured mode (or just `only`) and ranks operating points.
[[nodiscard]] PlanResult plan(const RunConfig& config, std::optional<OperatingMode> only = {},
                              unsigned threads = 0);

/// Sweep CSV with columns d_np_nm,f_rep_hz,mode,rate_cps,snr.
[[nodiscard]] std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace fpcav
