// Python bindings. Structured results cross the boundary as JSON text and
// are decoded by the pure-Python wrapper in fpcav/__init__.py.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>

#include "fpcav/commands.hpp"
#include "fpcav/config.hpp"
#include "fpcav/trace_io.hpp"

namespace py = pybind11;
using namespace fpcav;

namespace {

RunConfig config_from(const std::optional<std::string>& text) {
  if (!text) return default_config();
  json doc;
  try {
    doc = json::parse(*text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", e.what());
  }
  return parse_config(doc);
}

Trace make_trace(std::vector<double> x, std::vector<double> y) {
  Trace t;
  t.x = std::move(x);
  t.y = std::move(y);
  try {
    t.validate();
  } catch (const DomainError& e) {
    throw InputError(e.what());
  }
  return t;
}

std::string run_fit(const std::string& model_name, std::vector<double> x, std::vector<double> y,
                    bool poisson, std::optional<std::pair<double, double>> range,
                    const std::map<std::string, double>& guess) {
  const FitModel model = FitModel::make(parse_model_id(model_name));
  const Trace trace = make_trace(std::move(x), std::move(y));
  FitOptions options;
  if (poisson) options.weighting = Weighting::poisson;
  const double lo = range ? range->first : -std::numeric_limits<double>::infinity();
  const double hi = range ? range->second : std::numeric_limits<double>::infinity();
  std::vector<double> initial;
  if (!guess.empty()) {
    Trace sub;
    for (std::size_t i = 0; i < trace.size(); ++i) {
      if (trace.x[i] >= lo && trace.x[i] <= hi) {
        sub.x.push_back(trace.x[i]);
        sub.y.push_back(trace.y[i]);
      }
    }
    initial = auto_initial_guess(model, sub);
    for (const auto& [name, value] : guess) initial[model.index_of(name)] = value;
  }
  return json(fit_range(model, trace, lo, hi, initial, options)).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fiber-cavity Purcell, spectroscopy and count-rate toolkit";
  m.attr("__version__") = FPCAV_VERSION;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<FitError>(m, "FitError", PyExc_RuntimeError);
  py::register_exception<NoSolutionError>(m, "NoSolutionError", PyExc_RuntimeError);

  m.def("default_config", &default_config_text);
  m.def("normalize_config",
        [](const std::optional<std::string>& text) { return config_to_json(config_from(text)).dump(); },
        py::arg("config") = py::none());

  m.def("cavity_report",
        [](const std::optional<std::string>& text) { return cavity_report(config_from(text)).dump(); },
        py::arg("config") = py::none());
  m.def("purcell_report",
        [](const std::optional<std::string>& text, unsigned threads) {
          const RunConfig c = config_from(text);
          py::gil_scoped_release release;
          return purcell_report(c, threads).dump();
        },
        py::arg("config") = py::none(), py::arg("threads") = 0);
  m.def("simulate",
        [](const std::string& kind, const std::optional<std::string>& text) {
          const auto sim = simulate(config_from(text), parse_simulation_kind(kind));
          return py::make_tuple(sim.trace.x, sim.trace.y, sim.metadata.dump());
        },
        py::arg("kind"), py::arg("config") = py::none());
  m.def("fit", &run_fit, py::arg("model"), py::arg("x"), py::arg("y"), py::arg("poisson") = false,
        py::arg("x_range") = py::none(), py::arg("guess") = std::map<std::string, double>{});
  m.def("plan",
        [](const std::optional<std::string>& text, const std::optional<std::string>& mode,
           unsigned threads) {
          const RunConfig c = config_from(text);
          std::optional<OperatingMode> only;
          if (mode) only = parse_operating_mode(*mode);
          PlanResult r;
          {
            py::gil_scoped_release release;
            r = plan(c, only, threads);
          }
          return py::make_tuple(sweep_csv(r.rows), r.report.dump());
        },
        py::arg("config") = py::none(), py::arg("mode") = py::none(), py::arg("threads") = 0);

  m.def("mode_waist", &mode_waist, py::arg("wavelength"), py::arg("radius_of_curvature"),
        py::arg("cavity_length"));
  m.def("double_resonance",
        [](double l1, double l2, int max_order) {
          const auto s = double_resonance(l1, l2, max_order);
          return py::make_tuple(s.mode_order_1, s.mode_order_2, s.cavity_length,
                                s.residual_detuning_2);
        },
        py::arg("lambda1"), py::arg("lambda2"), py::arg("max_order") = 100);
  m.def("finesse",
        [](double t_in, double t_out, double loss, double particle) {
          return finesse(LossBudget(t_in, t_out, loss, particle));
        },
        py::arg("transmission_in"), py::arg("transmission_out"), py::arg("absorption_scatter"),
        py::arg("particle_scatter") = 0.0);
  m.def("nominal_purcell", &nominal_purcell, py::arg("wavelength"), py::arg("refractive_index"),
        py::arg("finesse"), py::arg("waist"));
  m.def("jitter_suppression", &jitter_suppression, py::arg("rms_jitter"), py::arg("wavelength"),
        py::arg("finesse"));
  m.def("purcell_from_lifetimes",
        [](double t1, double t1c) { return purcell_from_lifetimes(t1, t1c).effective_purcell; },
        py::arg("free_space_lifetime"), py::arg("cavity_lifetime"));
  m.def("saturation_intensity", &saturation_intensity, py::arg("homogeneous_linewidth"),
        py::arg("branching_ratio"), py::arg("wavelength"));
  m.def("saturation_power", &saturation_power, py::arg("intensity"), py::arg("waist"));
  m.def("snr", &snr, py::arg("signal_rate"), py::arg("dark_rate"),
        py::arg("integration_time") = 1.0);
}
