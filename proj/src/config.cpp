#include "fpcav/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace fpcav {

namespace {

const char kDefaultConfig[] =
#include "default_config.inc"
    ;

std::string at(const std::string& path, const std::string& key) { return path + "/" + key; }

template <class Make>
auto construct_or_throw(const std::string& path, Make&& make) {
  try {
    return make();
  } catch (const DomainError& e) {
    throw ConfigError(path, e.what());
  }
}

bool get_bool(const json& obj, const std::string& key, const std::string& path, bool fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_boolean()) throw ConfigError(at(path, key), "expected true or false");
  return it->get<bool>();
}

std::size_t get_count(const json& obj, const std::string& key, const std::string& path,
                      long long minimum) {
  const long long v = get_integer(obj, key, path);
  if (v < minimum) {
    throw ConfigError(at(path, key), "must be >= " + std::to_string(minimum));
  }
  return static_cast<std::size_t>(v);
}

double get_positive(const json& obj, const std::string& key, const std::string& path) {
  const double v = get_number(obj, key, path);
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(at(path, key), "must be positive");
  return v;
}

double get_nonnegative(const json& obj, const std::string& key, const std::string& path) {
  const double v = get_number(obj, key, path);
  if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(at(path, key), "must be >= 0");
  return v;
}

void require_range(double lo, double hi, const std::string& path) {
  if (!(hi >= lo)) throw ConfigError(path, "empty range: maximum below minimum");
}

ChannelConfig parse_channel(const json& j, const std::string& path) {
  return ChannelConfig{
      transition_from_json(get_object(j, "transition", path), at(path, "transition")),
      mirror_from_json(get_object(j, "mirror_in", path), at(path, "mirror_in")),
      mirror_from_json(get_object(j, "mirror_out", path), at(path, "mirror_out"))};
}

json channel_to_json(const ChannelConfig& c) {
  return json{{"transition", c.transition}, {"mirror_in", c.input}, {"mirror_out", c.output}};
}

ModeSettings parse_mode(const json& j, const std::string& path, bool allow_auto_length) {
  ModeSettings m;
  m.cavity_length = allow_auto_length ? get_nonnegative(j, "cavity_length", path)
                                      : get_positive(j, "cavity_length", path);
  m.rms_jitter = get_nonnegative(j, "rms_length_jitter", path);
  return m;
}

IsotopeLines parse_isotope(const json& j, const std::string& path) {
  IsotopeLines iso;
  iso.abundance = get_nonnegative(j, "abundance", path);
  const auto it = j.find("line_offsets");
  if (it == j.end()) throw ConfigError(at(path, "line_offsets"), "missing field");
  if (!it->is_array() || it->empty()) {
    throw ConfigError(at(path, "line_offsets"), "expected a non-empty array of numbers");
  }
  iso.line_offsets.clear();
  for (std::size_t i = 0; i < it->size(); ++i) {
    const auto& v = (*it)[i];
    if (!v.is_number()) {
      throw ConfigError(at(path, "line_offsets/" + std::to_string(i)), "expected a number");
    }
    iso.line_offsets.push_back(v.get<double>());
  }
  return iso;
}

}  // namespace

LossBudget ChannelConfig::bare_budget() const {
  return {input.transmission(), output.transmission(),
          input.absorption_scatter_loss() + output.absorption_scatter_loss()};
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("/", "configuration must be a JSON object");
  const long long version = get_integer(doc, "schema_version", "");
  if (version != kSchemaVersion) {
    throw ConfigError("/schema_version", "unsupported schema version " + std::to_string(version));
  }
  const long long seed = get_integer(doc, "seed", "");
  if (seed < 0) throw ConfigError("/seed", "must be >= 0");

  const json& cav = get_object(doc, "cavity", "");
  CavitySettings cavity;
  cavity.radius_of_curvature = get_positive(cav, "radius_of_curvature", "/cavity");
  cavity.refractive_index = get_positive(cav, "refractive_index", "/cavity");
  cavity.max_mode_order = static_cast<int>(get_count(cav, "max_mode_order", "/cavity", 2));
  cavity.rms_length_jitter = get_nonnegative(cav, "rms_length_jitter", "/cavity");

  const json& ch = get_object(doc, "channels", "");
  ChannelConfig primary = parse_channel(get_object(ch, "primary", "/channels"), "/channels/primary");
  ChannelConfig secondary =
      parse_channel(get_object(ch, "secondary", "/channels"), "/channels/secondary");
  if (!(secondary.transition.wavelength() > primary.transition.wavelength())) {
    throw ConfigError("/channels/secondary/transition/wavelength",
                      "must exceed the primary wavelength");
  }

  Nanoparticle np = nanoparticle_from_json(get_object(doc, "nanoparticle", ""), "/nanoparticle");

  const json& sc = get_object(doc, "scattering", "");
  ScatteringModel scattering{get_positive(sc, "reference_loss", "/scattering"),
                             get_positive(sc, "reference_diameter", "/scattering"),
                             get_positive(sc, "reference_wavelength", "/scattering"),
                             get_number(sc, "wavelength_exponent", "/scattering")};

  const json& en = get_object(doc, "ensemble", "");
  EnsembleSettings ensemble;
  ensemble.samples = get_count(en, "samples", "/ensemble", 1);
  ensemble.penetration_fraction = get_number(en, "penetration_fraction", "/ensemble");

  const json& tb = get_object(doc, "table", "");
  TableSettings table;
  table.nanoparticle_diameter = get_nonnegative(tb, "nanoparticle_diameter", "/table");
  table.include_jitter = get_bool(tb, "include_jitter", "/table", false);

  const json& io = get_object(doc, "ions", "");
  IonSettings ions;
  ions.inhomogeneous_fwhm = get_positive(io, "inhomogeneous_fwhm", "/ions");
  ions.probe_power = get_nonnegative(io, "probe_power", "/ions");
  ions.draws = get_count(io, "draws", "/ions", 1);
  {
    const auto it = io.find("isotopes");
    if (it == io.end()) throw ConfigError("/ions/isotopes", "missing field");
    if (!it->is_array() || it->empty()) {
      throw ConfigError("/ions/isotopes", "expected a non-empty array");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < it->size(); ++i) {
      ions.isotopes.push_back(parse_isotope((*it)[i], "/ions/isotopes/" + std::to_string(i)));
      sum += ions.isotopes.back().abundance;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("/ions/isotopes", "abundances must sum to 1");
  }

  const json& sim = get_object(doc, "simulate", "");
  const json& jp = get_object(sim, "ple", "/simulate");
  PleSettings ple;
  ple.span = get_positive(jp, "span", "/simulate/ple");
  ple.points = get_count(jp, "points", "/simulate/ple", 2);
  ple.amplitude = get_nonnegative(jp, "amplitude", "/simulate/ple");
  ple.background = get_nonnegative(jp, "background", "/simulate/ple");
  ple.fine_structure = get_bool(jp, "fine_structure", "/simulate/ple", true);
  ple.poisson = get_bool(jp, "poisson", "/simulate/ple", true);

  const json& js = get_object(sim, "saturation", "/simulate");
  SaturationSettings sat;
  sat.r0 = get_nonnegative(js, "r0", "/simulate/saturation");
  sat.beta = get_positive(js, "beta", "/simulate/saturation");
  if (sat.beta > 1.0) throw ConfigError("/simulate/saturation/beta", "must lie in (0, 1]");
  sat.background = get_nonnegative(js, "background", "/simulate/saturation");
  sat.power_min = get_positive(js, "power_min", "/simulate/saturation");
  sat.power_max = get_positive(js, "power_max", "/simulate/saturation");
  require_range(sat.power_min, sat.power_max, "/simulate/saturation/power_max");
  sat.points = get_count(js, "points", "/simulate/saturation", 2);
  sat.poisson = get_bool(js, "poisson", "/simulate/saturation", true);

  const json& jh = get_object(sim, "hole", "/simulate");
  HoleSettings hole;
  hole.teeth = static_cast<int>(get_count(jh, "teeth", "/simulate/hole", 1));
  hole.tooth_power = get_positive(jh, "tooth_power", "/simulate/hole");
  hole.hole_fwhm = get_positive(jh, "hole_fwhm", "/simulate/hole");
  hole.r0 = get_nonnegative(jh, "r0", "/simulate/hole");
  hole.span = get_positive(jh, "span", "/simulate/hole");
  hole.points = get_count(jh, "points", "/simulate/hole", 2);
  hole.poisson = get_bool(jh, "poisson", "/simulate/hole", true);

  const json& jd = get_object(sim, "decay", "/simulate");
  DecaySettings decay;
  decay.effective_purcell = get_nonnegative(jd, "effective_purcell", "/simulate/decay");
  decay.shots = get_positive(jd, "shots", "/simulate/decay");
  decay.amplitude = get_nonnegative(jd, "amplitude", "/simulate/decay");
  decay.background = get_nonnegative(jd, "background", "/simulate/decay");
  decay.time_max = get_positive(jd, "time_max", "/simulate/decay");
  decay.bins = get_count(jd, "bins", "/simulate/decay", 2);
  decay.poisson = get_bool(jd, "poisson", "/simulate/decay", true);

  const json& det = get_object(doc, "detection", "");
  DetectionChain chain = construct_or_throw("/detection", [&] {
    return DetectionChain(get_number(det, "path_transmission", "/detection"),
                          get_number(det, "detector_efficiency", "/detection"),
                          get_number(det, "dark_rate", "/detection"));
  });

  const json& pu = get_object(doc, "pulse", "");
  const double t_ex = get_positive(pu, "excitation_time", "/pulse");
  const double p_ex = get_positive(pu, "excited_population", "/pulse");
  if (p_ex > 1.0) throw ConfigError("/pulse/excited_population", "must lie in (0, 1]");

  const json& md = get_object(doc, "modes", "");
  ModeSettings contact = parse_mode(get_object(md, "contact", "/modes"), "/modes/contact", false);
  ModeSettings open = parse_mode(get_object(md, "open", "/modes"), "/modes/open", true);
  for (const auto& [name, m] : {std::pair{"contact", contact}, std::pair{"open", open}}) {
    if (m.cavity_length >= cavity.radius_of_curvature) {
      throw ConfigError(std::string("/modes/") + name + "/cavity_length",
                        "unstable geometry: cavity length must be below the radius of curvature");
    }
  }

  const json& sw = get_object(doc, "sweep", "");
  SweepSettings sweep;
  sweep.diameter_min = get_positive(sw, "diameter_min", "/sweep");
  sweep.diameter_max = get_positive(sw, "diameter_max", "/sweep");
  require_range(sweep.diameter_min, sweep.diameter_max, "/sweep/diameter_max");
  sweep.diameter_points = get_count(sw, "diameter_points", "/sweep", 1);
  sweep.repetition_min = get_positive(sw, "repetition_min", "/sweep");
  sweep.repetition_max = get_positive(sw, "repetition_max", "/sweep");
  require_range(sweep.repetition_min, sweep.repetition_max, "/sweep/repetition_max");
  sweep.repetition_points = get_count(sw, "repetition_points", "/sweep", 1);
  if (!(1.0 / sweep.repetition_max > t_ex)) {
    throw ConfigError("/sweep/repetition_max", "period must exceed the excitation time");
  }
  {
    const auto it = sw.find("modes");
    if (it == sw.end()) throw ConfigError("/sweep/modes", "missing field");
    if (!it->is_array() || it->empty()) throw ConfigError("/sweep/modes", "expected a non-empty array");
    sweep.modes.clear();
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string p = "/sweep/modes/" + std::to_string(i);
      if (!(*it)[i].is_string()) throw ConfigError(p, "expected a mode name");
      try {
        sweep.modes.push_back(parse_operating_mode((*it)[i].get<std::string>()));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(p, e.what());
      }
    }
  }

  return RunConfig{.schema_version = static_cast<int>(version),
                   .seed = static_cast<std::uint64_t>(seed),
                   .cavity = cavity,
                   .primary = primary,
                   .secondary = secondary,
                   .nanoparticle = np,
                   .scattering = scattering,
                   .ensemble = ensemble,
                   .table = table,
                   .ions = ions,
                   .ple = ple,
                   .saturation = sat,
                   .hole = hole,
                   .decay = decay,
                   .detection = chain,
                   .excitation_time = t_ex,
                   .excited_population = p_ex,
                   .contact = contact,
                   .open = open,
                   .sweep = sweep};
}

json config_to_json(const RunConfig& c) {
  json isotopes = json::array();
  for (const auto& iso : c.ions.isotopes) {
    isotopes.push_back({{"abundance", iso.abundance}, {"line_offsets", iso.line_offsets}});
  }
  json modes = json::array();
  for (auto m : c.sweep.modes) modes.push_back(std::string(to_string(m)));
  return json{
      {"schema_version", c.schema_version},
      {"seed", c.seed},
      {"cavity",
       {{"radius_of_curvature", c.cavity.radius_of_curvature},
        {"refractive_index", c.cavity.refractive_index},
        {"max_mode_order", c.cavity.max_mode_order},
        {"rms_length_jitter", c.cavity.rms_length_jitter}}},
      {"channels",
       {{"primary", channel_to_json(c.primary)}, {"secondary", channel_to_json(c.secondary)}}},
      {"nanoparticle", c.nanoparticle},
      {"scattering",
       {{"reference_loss", c.scattering.reference_loss_ppm},
        {"reference_diameter", c.scattering.reference_diameter},
        {"reference_wavelength", c.scattering.reference_wavelength},
        {"wavelength_exponent", c.scattering.wavelength_exponent}}},
      {"ensemble",
       {{"samples", c.ensemble.samples},
        {"penetration_fraction", c.ensemble.penetration_fraction}}},
      {"table",
       {{"nanoparticle_diameter", c.table.nanoparticle_diameter},
        {"include_jitter", c.table.include_jitter}}},
      {"ions",
       {{"inhomogeneous_fwhm", c.ions.inhomogeneous_fwhm},
        {"probe_power", c.ions.probe_power},
        {"draws", c.ions.draws},
        {"isotopes", isotopes}}},
      {"simulate",
       {{"ple",
         {{"span", c.ple.span},
          {"points", c.ple.points},
          {"amplitude", c.ple.amplitude},
          {"background", c.ple.background},
          {"fine_structure", c.ple.fine_structure},
          {"poisson", c.ple.poisson}}},
        {"saturation",
         {{"r0", c.saturation.r0},
          {"beta", c.saturation.beta},
          {"background", c.saturation.background},
          {"power_min", c.saturation.power_min},
          {"power_max", c.saturation.power_max},
          {"points", c.saturation.points},
          {"poisson", c.saturation.poisson}}},
        {"hole",
         {{"teeth", c.hole.teeth},
          {"tooth_power", c.hole.tooth_power},
          {"hole_fwhm", c.hole.hole_fwhm},
          {"r0", c.hole.r0},
          {"span", c.hole.span},
          {"points", c.hole.points},
          {"poisson", c.hole.poisson}}},
        {"decay",
         {{"effective_purcell", c.decay.effective_purcell},
          {"shots", c.decay.shots},
          {"amplitude", c.decay.amplitude},
          {"background", c.decay.background},
          {"time_max", c.decay.time_max},
          {"bins", c.decay.bins},
          {"poisson", c.decay.poisson}}}}},
      {"detection",
       {{"path_transmission", c.detection.path_transmission()},
        {"detector_efficiency", c.detection.detector_efficiency()},
        {"dark_rate", c.detection.dark_rate()}}},
      {"pulse",
       {{"excitation_time", c.excitation_time}, {"excited_population", c.excited_population}}},
      {"modes",
       {{"contact",
         {{"cavity_length", c.contact.cavity_length},
          {"rms_length_jitter", c.contact.rms_jitter}}},
        {"open",
         {{"cavity_length", c.open.cavity_length}, {"rms_length_jitter", c.open.rms_jitter}}}}},
      {"sweep",
       {{"diameter_min", c.sweep.diameter_min},
        {"diameter_max", c.sweep.diameter_max},
        {"diameter_points", c.sweep.diameter_points},
        {"repetition_min", c.sweep.repetition_min},
        {"repetition_max", c.sweep.repetition_max},
        {"repetition_points", c.sweep.repetition_points},
        {"modes", modes}}}};
}

const std::string& default_config_text() {
  static const std::string text(kDefaultConfig);
  return text;
}

RunConfig default_config() { return parse_config(json::parse(default_config_text())); }

json load_config_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("/", "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("/", "invalid JSON in '" + path + "': " + e.what());
  }
}

DoubleResonanceSolution open_resonance(const RunConfig& config) {
  return double_resonance(config.primary.transition.wavelength(),
                          config.secondary.transition.wavelength(), config.cavity.max_mode_order);
}

ModeSettings resolved_open_mode(const RunConfig& config) {
  ModeSettings m = config.open;
  if (m.cavity_length == 0.0) m.cavity_length = open_resonance(config).cavity_length;
  return m;
}

PlannerConfig planner_config(const RunConfig& config) {
  return PlannerConfig{
      .radius_of_curvature = config.cavity.radius_of_curvature,
      .refractive_index = config.cavity.refractive_index,
      .primary = {config.primary.transition, config.primary.bare_budget()},
      .secondary = {config.secondary.transition, config.secondary.bare_budget()},
      .contact = config.contact,
      .open = resolved_open_mode(config),
      .scattering = config.scattering,
      .chain = config.detection,
      .excitation_time = config.excitation_time,
      .excited_population = config.excited_population};
}

SpectralPopulation spectral_population(const RunConfig& config) {
  SpectralPopulation pop;
  pop.total_ions = total_ion_count(config.nanoparticle);
  pop.inhomogeneous_fwhm = config.ions.inhomogeneous_fwhm;
  pop.center_frequency = wavelength_to_frequency(config.primary.transition.wavelength());
  pop.isotopes = config.ions.isotopes;
  pop.validate();
  return pop;
}

}  // namespace fpcav
