#include "fpcav/commands.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fpcav/trace_io.hpp"

namespace fpcav {

namespace {

struct ChannelOptics {
  double waist;
  double finesse;
  double kappa;
  double nominal;
};

ChannelOptics optics(const RunConfig& c, const ChannelConfig& ch, double length,
                     double particle_diameter) {
  const double lambda = ch.transition.wavelength();
  const LossBudget budget =
      ch.bare_budget().with_particle_scatter(np_scattering_loss(particle_diameter, lambda, c.scattering));
  ChannelOptics o{};
  o.waist = mode_waist(lambda, c.cavity.radius_of_curvature, length);
  o.finesse = finesse(budget);
  o.kappa = cavity_linewidth_kappa(length, budget);
  o.nominal = nominal_purcell(lambda, c.cavity.refractive_index, o.finesse, o.waist);
  return o;
}

json channel_cavity_json(const RunConfig& c, const ChannelConfig& ch, double length) {
  const LossBudget bare = ch.bare_budget();
  const double lambda = ch.transition.wavelength();
  const double scatter = np_scattering_loss(c.nanoparticle.diameter(), lambda, c.scattering);
  const LossBudget loaded = bare.with_particle_scatter(scatter);
  return json{{"wavelength", lambda},
              {"waist", mode_waist(lambda, c.cavity.radius_of_curvature, length)},
              {"loss_ppm", bare.total_ppm()},
              {"finesse", finesse(bare)},
              {"kappa", cavity_linewidth_kappa(length, bare)},
              {"outcoupling", outcoupling_efficiency(bare.transmission_out(), bare)},
              {"particle_scatter_ppm", scatter},
              {"finesse_with_particle", finesse(loaded)},
              {"kappa_with_particle", cavity_linewidth_kappa(length, loaded)}};
}

json row_json(const SweepRow& row) { return json(row); }

}  // namespace

json cavity_report(const RunConfig& c) {
  const auto dr = open_resonance(c);
  const ModeSettings open = resolved_open_mode(c);
  json report;
  report["radius_of_curvature"] = c.cavity.radius_of_curvature;
  report["double_resonance"] = dr;
  report["double_resonance"]["fsr"] = free_spectral_range(dr.cavity_length);
  report["open"] = json{{"cavity_length", open.cavity_length},
                        {"fsr", free_spectral_range(open.cavity_length)},
                        {"primary", channel_cavity_json(c, c.primary, open.cavity_length)},
                        {"secondary", channel_cavity_json(c, c.secondary, open.cavity_length)}};
  report["contact"] = json{{"cavity_length", c.contact.cavity_length},
                           {"fsr", free_spectral_range(c.contact.cavity_length)},
                           {"primary", channel_cavity_json(c, c.primary, c.contact.cavity_length)},
                           {"secondary",
                            channel_cavity_json(c, c.secondary, c.contact.cavity_length)}};
  return report;
}

std::vector<CouplingReport> coupling_table(const RunConfig& c) {
  const double length = resolved_open_mode(c).cavity_length;
  std::vector<CouplingReport> rows;
  for (const ChannelConfig* ch : {&c.primary, &c.secondary}) {
    const auto o = optics(c, *ch, length, c.table.nanoparticle_diameter);
    const double jitter =
        c.table.include_jitter
            ? jitter_suppression(c.cavity.rms_length_jitter, ch->transition.wavelength(), o.finesse)
            : 1.0;
    rows.push_back(make_coupling_report(ch->transition, o.nominal, o.kappa,
                                        CouplingDegradation(jitter, 1.0, 1.0, 1.0)));
  }
  return rows;
}

std::vector<ChannelCoupling> open_channels(const RunConfig& c, double particle_diameter) {
  const double length = resolved_open_mode(c).cavity_length;
  std::vector<ChannelCoupling> channels;
  for (const ChannelConfig* ch : {&c.primary, &c.secondary}) {
    const auto o = optics(c, *ch, length, particle_diameter);
    const double lambda = ch->transition.wavelength();
    channels.push_back(ChannelCoupling{
        ch->transition, o.nominal, o.kappa,
        jitter_suppression(c.cavity.rms_length_jitter, lambda, o.finesse),
        antinode_offset(lambda, c.ensemble.penetration_fraction)});
  }
  return channels;
}

double ion_probe_width(const RunConfig& c) {
  const Transition& t = c.primary.transition;
  const double waist = mode_waist(t.wavelength(), c.cavity.radius_of_curvature,
                                  resolved_open_mode(c).cavity_length);
  const double p_sat = saturation_power(
      saturation_intensity(t.homogeneous_linewidth(), t.branching_ratio(), t.wavelength()), waist);
  return t.homogeneous_linewidth() * std::sqrt(1.0 + c.ions.probe_power / p_sat);
}

json purcell_report(const RunConfig& c, unsigned threads) {
  json report;
  const auto table = coupling_table(c);
  report["table"] = json{{"nanoparticle_diameter", c.table.nanoparticle_diameter},
                         {"include_jitter", c.table.include_jitter},
                         {"cavity_length", resolved_open_mode(c).cavity_length},
                         {"primary", table[0]},
                         {"secondary", table[1]}};

  const double d = c.nanoparticle.diameter();
  const auto channels = open_channels(c, d);
  const std::span<const ChannelCoupling> primary_only(channels.data(), 1);
  const auto s1 = ensemble_purcell_stats(d, primary_only, c.ensemble.samples, c.seed, threads);
  const auto s2 = ensemble_purcell_stats(d, channels, c.ensemble.samples, c.seed, threads);
  const double f1 = max_effective_purcell(primary_only);
  const double f2 = max_effective_purcell(std::span<const ChannelCoupling>(channels.data() + 1, 1));
  const double parts[] = {f1, f2};
  report["ensemble"] = json{{"nanoparticle_diameter", d},
                            {"rms_length_jitter", c.cavity.rms_length_jitter},
                            {"jitter_factor_primary", channels[0].jitter_factor},
                            {"jitter_factor_secondary", channels[1].jitter_factor},
                            {"primary_only", s1},
                            {"both", s2},
                            {"max_f_eff_secondary", f2},
                            {"max_f_eff_multimodal", multimodal_sum(parts)},
                            {"cavity_branching_primary",
                             cavity_branching(f1, c.primary.transition.branching_ratio())}};

  const Transition& t = c.primary.transition;
  const double waist = mode_waist(t.wavelength(), c.cavity.radius_of_curvature,
                                  resolved_open_mode(c).cavity_length);
  const double i_sat =
      saturation_intensity(t.homogeneous_linewidth(), t.branching_ratio(), t.wavelength());
  report["saturation"] =
      json{{"intensity", i_sat}, {"waist", waist}, {"power", saturation_power(i_sat, waist)}};

  const auto pop = spectral_population(c);
  const double width = ion_probe_width(c);
  const auto ions =
      ions_in_bandwidth(pop, pop.center_frequency, width, c.ions.draws, c.seed, threads);
  report["ions"] = json{{"total_ions", pop.total_ions},
                        {"probe_power", c.ions.probe_power},
                        {"probe_width", width},
                        {"in_bandwidth", ions}};
  return report;
}

SimulationKind parse_simulation_kind(std::string_view name) {
  if (name == "ple") return SimulationKind::ple;
  if (name == "saturation") return SimulationKind::saturation;
  if (name == "hole") return SimulationKind::hole;
  if (name == "decay") return SimulationKind::decay;
  throw std::invalid_argument("unknown simulation kind '" + std::string(name) + "'");
}

std::string_view to_string(SimulationKind kind) {
  switch (kind) {
    case SimulationKind::ple:
      return "ple";
    case SimulationKind::saturation:
      return "saturation";
    case SimulationKind::hole:
      return "hole";
    case SimulationKind::decay:
      return "decay";
  }
  return "?";
}

Simulation simulate(const RunConfig& c, SimulationKind kind) {
  auto noise = [](bool poisson) { return poisson ? NoiseModel::poisson : NoiseModel::none; };
  Simulation sim;
  json& m = sim.metadata;
  m["kind"] = std::string(to_string(kind));
  m["seed"] = c.seed;
  switch (kind) {
    case SimulationKind::ple: {
      const auto grid = linspace(-c.ple.span / 2.0, c.ple.span / 2.0, c.ple.points);
      PleParams p{c.ions.inhomogeneous_fwhm, 0.0, c.ple.amplitude, c.ple.background};
      std::optional<FineStructure> sfs;
      if (c.ple.fine_structure) {
        SpectralPopulation pop = spectral_population(c);
        pop.center_frequency = 0.0;  // the grid is a detuning
        sfs = FineStructure{pop, ion_probe_width(c)};
      }
      sim.trace = ple_scan(p, grid, sfs, noise(c.ple.poisson), c.seed);
      m["x"] = "detuning_hz";
      m["y"] = "counts_per_s";
      m["inhomogeneous_fwhm"] = p.inhomogeneous_fwhm;
      m["amplitude"] = p.amplitude;
      m["background"] = p.background;
      m["fine_structure"] = c.ple.fine_structure;
      if (sfs) {
        m["total_ions"] = sfs->population.total_ions;
        m["probe_width"] = sfs->probe_width;
      }
      m["poisson"] = c.ple.poisson;
      break;
    }
    case SimulationKind::saturation: {
      const auto& s = c.saturation;
      const auto powers = logspace(s.power_min, s.power_max, s.points);
      sim.trace = saturation_curve(powers, s.r0, s.beta, s.background, noise(s.poisson), c.seed);
      m["x"] = "power";
      m["y"] = "counts_per_s";
      m["r0"] = s.r0;
      m["beta"] = s.beta;
      m["background"] = s.background;
      m["poisson"] = s.poisson;
      break;
    }
    case SimulationKind::hole: {
      const auto& h = c.hole;
      const auto grid = linspace(-h.span / 2.0, h.span / 2.0, h.points);
      sim.trace = hole_spectrum(HoleParams{h.teeth, h.tooth_power, h.hole_fwhm, h.r0}, grid,
                                noise(h.poisson), c.seed);
      m["x"] = "tooth_detuning_hz";
      m["y"] = "counts_per_s";
      m["teeth"] = h.teeth;
      m["tooth_power"] = h.tooth_power;
      m["hole_fwhm"] = h.hole_fwhm;
      m["r0"] = h.r0;
      m["poisson"] = h.poisson;
      break;
    }
    case SimulationKind::decay: {
      const auto& dc = c.decay;
      const double t1 = c.primary.transition.free_space_lifetime();
      const double lifetime = cavity_enhanced_lifetime(t1, dc.effective_purcell);
      const auto bins = linspace(0.0, dc.time_max, dc.bins);
      sim.trace = decay_histogram(lifetime, bins, dc.shots, dc.amplitude, dc.background,
                                  noise(dc.poisson), c.seed);
      m["x"] = "time_s";
      m["y"] = "counts";
      m["free_space_lifetime"] = t1;
      m["effective_purcell"] = dc.effective_purcell;
      m["effective_lifetime"] = lifetime;
      m["shots"] = dc.shots;
      m["amplitude"] = dc.amplitude;
      m["background"] = dc.background;
      m["poisson"] = dc.poisson;
      break;
    }
  }
  m["points"] = sim.trace.size();
  return sim;
}

PlanResult plan(const RunConfig& c, std::optional<OperatingMode> only, unsigned threads) {
  const PlannerConfig pc = planner_config(c);
  const auto diameters = linspace(c.sweep.diameter_min, c.sweep.diameter_max, c.sweep.diameter_points);
  const auto reps = logspace(c.sweep.repetition_min, c.sweep.repetition_max, c.sweep.repetition_points);
  const double reference[] = {c.table.nanoparticle_diameter};

  std::vector<OperatingMode> modes = c.sweep.modes;
  if (only) modes = {*only};

  PlanResult result;
  json per_mode = json::object();
  for (OperatingMode mode : modes) {
    auto rows = sweep_grid(pc, diameters, reps, mode, threads);
    double max_purcell = 0.0;
    for (const auto& r : rows) max_purcell = std::max(max_purcell, r.effective_purcell);
    const auto ref_rows = sweep_grid(pc, reference, reps, mode, threads);
    per_mode[std::string(to_string(mode))] =
        json{{"best", row_json(best_operating_point(rows))},
             {"best_at_reference_diameter", row_json(best_operating_point(ref_rows))},
             {"max_effective_purcell", max_purcell}};
    result.rows.insert(result.rows.end(), rows.begin(), rows.end());
  }
  result.report = json{{"reference_diameter", c.table.nanoparticle_diameter},
                       {"modes", per_mode},
                       {"best", row_json(best_operating_point(result.rows))},
                       {"rows", result.rows.size()}};
  return result;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  const std::string header[] = {"d_np_nm", "f_rep_hz", "mode", "rate_cps", "snr"};
  std::vector<std::vector<std::string>> cells;
  cells.reserve(rows.size());
  for (const auto& r : rows) {
    cells.push_back({format_number(r.particle_diameter * 1e9), format_number(r.repetition_rate),
                     std::string(to_string(r.mode)), format_number(r.rate), format_number(r.snr)});
  }
  std::ostringstream out;
  write_csv(out, header, cells);
  return out.str();
}

}  // namespace fpcav
