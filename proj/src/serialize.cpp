#include "fpcav/serialize.hpp"

#include <cmath>
#include <limits>

namespace fpcav {

namespace {

std::string join(const std::string& path, const std::string& key) { return path + "/" + key; }

template <class Make>
auto construct(const std::string& path, Make&& make) {
  try {
    return make();
  } catch (const DomainError& e) {
    throw ConfigError(path.empty() ? "/" : path, e.what());
  }
}

// Non-finite values are written as null so output stays valid JSON.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

const json& get_object(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "/" : path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(join(path, key), "missing field");
  if (!it->is_object()) throw ConfigError(join(path, key), "expected an object");
  return *it;
}

double get_number(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "/" : path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(join(path, key), "missing field");
  if (!it->is_number()) throw ConfigError(join(path, key), "expected a number");
  return it->get<double>();
}

double get_number(const json& obj, const std::string& key, const std::string& path,
                  double fallback) {
  if (obj.is_object() && !obj.contains(key)) return fallback;
  return get_number(obj, key, path);
}

long long get_integer(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "/" : path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(join(path, key), "missing field");
  if (!it->is_number_integer()) throw ConfigError(join(path, key), "expected an integer");
  return it->get<long long>();
}

Transition transition_from_json(const json& j, const std::string& path) {
  return construct(path, [&] {
    return Transition(get_number(j, "wavelength", path), get_number(j, "branching_ratio", path),
                      get_number(j, "homogeneous_linewidth", path),
                      get_number(j, "free_space_lifetime", path));
  });
}

MirrorSpec mirror_from_json(const json& j, const std::string& path) {
  return construct(path, [&] {
    return MirrorSpec(get_number(j, "transmission", path),
                      get_number(j, "absorption_scatter_loss", path));
  });
}

CavityGeometry geometry_from_json(const json& j, const std::string& path) {
  return construct(path, [&] {
    return CavityGeometry(get_number(j, "radius_of_curvature", path),
                          get_number(j, "cavity_length", path),
                          static_cast<int>(get_integer(j, "mode_order", path)),
                          get_number(j, "rms_length_jitter", path));
  });
}

Nanoparticle nanoparticle_from_json(const json& j, const std::string& path) {
  return construct(path, [&] {
    return Nanoparticle(get_number(j, "diameter", path), get_number(j, "dopant_concentration", path),
                        get_number(j, "cation_density", path, constants::y2o3_cation_density),
                        get_number(j, "refractive_index", path, 1.93));
  });
}

LossBudget loss_budget_from_json(const json& j, const std::string& path) {
  return construct(path, [&] {
    return LossBudget(get_number(j, "transmission_in", path),
                      get_number(j, "transmission_out", path),
                      get_number(j, "absorption_scatter", path),
                      get_number(j, "particle_scatter", path, 0.0));
  });
}

void to_json(json& j, const Transition& t) {
  j = json{{"wavelength", t.wavelength()},
           {"branching_ratio", t.branching_ratio()},
           {"homogeneous_linewidth", t.homogeneous_linewidth()},
           {"free_space_lifetime", t.free_space_lifetime()}};
}

void to_json(json& j, const MirrorSpec& m) {
  j = json{{"transmission", m.transmission()},
           {"absorption_scatter_loss", m.absorption_scatter_loss()}};
}

void to_json(json& j, const CavityGeometry& g) {
  j = json{{"radius_of_curvature", g.radius_of_curvature()},
           {"cavity_length", g.cavity_length()},
           {"mode_order", g.mode_order()},
           {"rms_length_jitter", g.rms_length_jitter()}};
}

void to_json(json& j, const Nanoparticle& np) {
  j = json{{"diameter", np.diameter()},
           {"dopant_concentration", np.dopant_concentration()},
           {"cation_density", np.cation_density()},
           {"refractive_index", np.refractive_index()}};
}

void to_json(json& j, const LossBudget& b) {
  j = json{{"transmission_in", b.transmission_in()},
           {"transmission_out", b.transmission_out()},
           {"absorption_scatter", b.absorption_scatter()},
           {"particle_scatter", b.particle_scatter()}};
}

void to_json(json& j, const DoubleResonanceSolution& s) {
  j = json{{"mode_order_1", s.mode_order_1},
           {"mode_order_2", s.mode_order_2},
           {"cavity_length", s.cavity_length},
           {"residual_detuning_2", s.residual_detuning_2}};
}

void to_json(json& j, const CouplingReport& r) {
  j = json{{"wavelength", r.wavelength},
           {"g", r.coupling_rate_g},
           {"kappa", r.cavity_linewidth},
           {"gamma_h", r.homogeneous_linewidth},
           {"f_eff", r.effective_purcell},
           {"cooperativity", r.cooperativity},
           {"f_p", r.nominal_purcell},
           {"zeta_c", r.cavity_branching}};
}

void to_json(json& j, const EnsembleStats& s) {
  j = json{{"mean_f_eff", s.mean_f_eff},
           {"std_f_eff", s.std_f_eff},
           {"max_f_eff", s.max_f_eff},
           {"sample_count", s.sample_count},
           {"seed", s.seed}};
}

void to_json(json& j, const IonCountStats& s) {
  j = json{{"mean", s.mean},
           {"std", s.std},
           {"expected", s.expected},
           {"draws", s.draws},
           {"seed", s.seed}};
}

void to_json(json& j, const FitResult& r) {
  json params = json::object();
  json errors = json::object();
  for (std::size_t i = 0; i < r.names.size(); ++i) {
    params[r.names[i]] = number(r.parameters[i]);
    errors[r.names[i]] = number(r.standard_errors[i]);
  }
  j = json{{"model", std::string(to_string(r.model))},
           {"parameters", params},
           {"standard_errors", errors},
           {"errors_available", r.errors_available},
           {"residual_sum_of_squares", number(r.residual_sum_of_squares)},
           {"converged", r.converged},
           {"iterations", r.iterations},
           {"gradient_norm", number(r.gradient_norm)},
           {"points", r.points}};
}

void to_json(json& j, const SweepRow& r) {
  j = json{{"d_np_nm", r.particle_diameter * 1e9},
           {"f_rep_hz", r.repetition_rate},
           {"mode", std::string(to_string(r.mode))},
           {"f_eff", r.effective_purcell},
           {"pulsed_rate", r.pulsed_rate},
           {"rate_cps", r.rate},
           {"snr", number(r.snr)}};
}

}  // namespace fpcav
