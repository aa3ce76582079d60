#pragma once

// JSON forms of the library types. Field names are snake_case and values are
// in SI base units (mirror losses in ppm). Reading a type goes through its
// validating constructor.

#include <json.hpp>

#include "fpcav/cavity.hpp"
#include "fpcav/ensemble.hpp"
#include "fpcav/fit.hpp"
#include "fpcav/planner.hpp"
#include "fpcav/purcell.hpp"
#include "fpcav/units.hpp"

namespace fpcav {

using json = nlohmann::json;

/// Raised for missing, mistyped or invalid configuration fields. `path` is a
/// JSON-pointer-like location such as "/nanoparticle/diameter".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  [[nodiscard]] const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Numeric field `key` of `obj`; throws ConfigError naming `path/key`.
[[nodiscard]] double get_number(const json& obj, const std::string& key, const std::string& path);
[[nodiscard]] double get_number(const json& obj, const std::string& key, const std::string& path,
                                double fallback);
[[nodiscard]] long long get_integer(const json& obj, const std::string& key,
                                    const std::string& path);
[[nodiscard]] const json& get_object(const json& obj, const std::string& key,
                                     const std::string& path);

[[nodiscard]] Transition transition_from_json(const json& j, const std::string& path = "");
[[nodiscard]] MirrorSpec mirror_from_json(const json& j, const std::string& path = "");
[[nodiscard]] CavityGeometry geometry_from_json(const json& j, const std::string& path = "");
[[nodiscard]] Nanoparticle nanoparticle_from_json(const json& j, const std::string& path = "");
[[nodiscard]] LossBudget loss_budget_from_json(const json& j, const std::string& path = "");

void to_json(json& j, const Transition& t);
void to_json(json& j, const MirrorSpec& m);
void to_json(json& j, const CavityGeometry& g);
void to_json(json& j, const Nanoparticle& np);
void to_json(json& j, const LossBudget& b);
void to_json(json& j, const DoubleResonanceSolution& s);
/// Table-1 shape: wavelength, g, kappa, gamma_h, f_eff, cooperativity (+ f_p, zeta_c).
void to_json(json& j, const CouplingReport& r);
void to_json(json& j, const EnsembleStats& s);
void to_json(json& j, const IonCountStats& s);
void to_json(json& j, const FitResult& r);
void to_json(json& j, const SweepRow& r);

}  // namespace fpcav

namespace nlohmann {

template <>
struct adl_serializer<fpcav::Transition> {
  static fpcav::Transition from_json(const json& j) { return fpcav::transition_from_json(j); }
  static void to_json(json& j, const fpcav::Transition& t) { fpcav::to_json(j, t); }
};
template <>
struct adl_serializer<fpcav::MirrorSpec> {
  static fpcav::MirrorSpec from_json(const json& j) { return fpcav::mirror_from_json(j); }
  static void to_json(json& j, const fpcav::MirrorSpec& m) { fpcav::to_json(j, m); }
};
template <>
struct adl_serializer<fpcav::CavityGeometry> {
  static fpcav::CavityGeometry from_json(const json& j) { return fpcav::geometry_from_json(j); }
  static void to_json(json& j, const fpcav::CavityGeometry& g) { fpcav::to_json(j, g); }
};
template <>
struct adl_serializer<fpcav::Nanoparticle> {
  static fpcav::Nanoparticle from_json(const json& j) { return fpcav::nanoparticle_from_json(j); }
  static void to_json(json& j, const fpcav::Nanoparticle& np) { fpcav::to_json(j, np); }
};
template <>
struct adl_serializer<fpcav::LossBudget> {
  static fpcav::LossBudget from_json(const json& j) { return fpcav::loss_budget_from_json(j); }
  static void to_json(json& j, const fpcav::LossBudget& b) { fpcav::to_json(j, b); }
};

}  // namespace nlohmann
