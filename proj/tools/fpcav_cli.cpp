// fpcav command-line front end.
//
// Exit codes: 0 success, 2 configuration or usage error, 3 input-data error,
// 4 numerical failure.

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fpcav/commands.hpp"
#include "fpcav/config.hpp"
#include "fpcav/manifest.hpp"
#include "fpcav/report.hpp"
#include "fpcav/trace_io.hpp"

namespace {

using namespace fpcav;

enum ExitCode : int { kOk = 0, kConfig = 2, kInput = 3, kNumeric = 4 };

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  bool as_json = false;
  std::string out;
  std::string manifest;

  std::string sim_kind;
  std::string fit_model;
  std::string fit_input;
  std::vector<double> fit_range;
  bool fit_poisson = false;
  std::vector<std::string> fit_guess;
  std::string plan_mode;
  std::string replay_manifest;
};

struct RunResult {
  int code = kOk;
  std::vector<OutputRecord> outputs;
};

class Session {
 public:
  Session(const Options& opt, std::string command) : opt_(opt), command_(std::move(command)) {}

  void print(const std::string& text) { stdout_ += text; }

  void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw InputError("write to '" + path + "' failed");
    outputs_.push_back(record_output(path, content));
  }

  /// Report to --out when given, otherwise to standard output.
  void emit_report(const json& report, const std::string& text) {
    const std::string body = opt_.as_json ? report.dump(2) + "\n" : text;
    if (opt_.out.empty()) {
      print(body);
    } else {
      write_file(opt_.out, body);
    }
  }

  std::vector<OutputRecord> finish() {
    if (!stdout_.empty()) {
      std::cout << stdout_ << std::flush;
      outputs_.push_back(record_output("-", stdout_));
    }
    return outputs_;
  }

  [[nodiscard]] const Options& options() const { return opt_; }

 private:
  const Options& opt_;
  std::string command_;
  std::string stdout_;
  std::vector<OutputRecord> outputs_;
};

std::string manifest_path(const Options& opt, const std::string& command) {
  if (!opt.manifest.empty()) return opt.manifest;
  if (!opt.out.empty()) return opt.out + ".manifest.json";
  return "fpcav-" + command + ".manifest.json";
}

std::vector<std::string> strip_config_args(const std::vector<std::string>& args) {
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      ++i;
      continue;
    }
    if (args[i].rfind("--config=", 0) == 0) continue;
    kept.push_back(args[i]);
  }
  return kept;
}

void cmd_cavity(Session& s, const RunConfig& config) {
  const json report = cavity_report(config);
  s.emit_report(report, text_report(report));
}

void cmd_purcell(Session& s, const RunConfig& config) {
  const json report = purcell_report(config, default_thread_count());
  s.emit_report(report, text_report(report));
}

void cmd_simulate(Session& s, const RunConfig& config) {
  const auto kind = parse_simulation_kind(s.options().sim_kind);
  const Simulation sim = simulate(config, kind);
  std::ostringstream csv;
  write_trace_csv(csv, sim.trace);
  const auto& opt = s.options();
  if (opt.out.empty()) {
    s.print(csv.str());
    return;
  }
  s.write_file(opt.out, csv.str());
  s.write_file(sidecar_path(opt.out), sim.metadata.dump(2) + "\n");
  s.print(opt.as_json ? sim.metadata.dump(2) + "\n" : text_report(sim.metadata));
}

void cmd_fit(Session& s) {
  const auto& opt = s.options();
  ModelId id;
  try {
    id = parse_model_id(opt.fit_model);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("/fit/model", e.what());
  }
  const FitModel model = FitModel::make(id);
  const Trace trace = read_trace_file(opt.fit_input);

  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  if (!opt.fit_range.empty()) {
    lo = opt.fit_range[0];
    hi = opt.fit_range[1];
    if (!(hi >= lo)) throw ConfigError("/fit/range", "maximum below minimum");
  }
  const auto in_range = static_cast<std::size_t>(std::count_if(
      trace.x.begin(), trace.x.end(), [&](double x) { return x >= lo && x <= hi; }));
  if (in_range <= model.parameter_count()) {
    throw InputError("fit range holds " + std::to_string(in_range) + " points; model '" +
                     opt.fit_model + "' needs more than " +
                     std::to_string(model.parameter_count()));
  }

  std::vector<double> initial;
  if (!opt.fit_guess.empty()) {
    Trace sub;
    for (std::size_t i = 0; i < trace.size(); ++i) {
      if (trace.x[i] >= lo && trace.x[i] <= hi) {
        sub.x.push_back(trace.x[i]);
        sub.y.push_back(trace.y[i]);
      }
    }
    initial = auto_initial_guess(model, sub);
    for (const auto& g : opt.fit_guess) {
      const auto eq = g.find('=');
      if (eq == std::string::npos) throw ConfigError("/fit/guess", "expected name=value, got '" + g + "'");
      try {
        initial[model.index_of(g.substr(0, eq))] = std::stod(g.substr(eq + 1));
      } catch (const std::exception& e) {
        throw ConfigError("/fit/guess", "bad guess '" + g + "': " + e.what());
      }
    }
  }

  FitOptions fo;
  fo.weighting = opt.fit_poisson ? Weighting::poisson : Weighting::none;
  const FitResult result = fit_range(model, trace, lo, hi, initial, fo);
  json report = result;
  report["input"] = opt.fit_input;
  s.emit_report(report, fit_text_report(result));
}

void cmd_plan(Session& s, const RunConfig& config) {
  std::optional<OperatingMode> only;
  if (!s.options().plan_mode.empty()) {
    try {
      only = parse_operating_mode(s.options().plan_mode);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("/plan/mode", e.what());
    }
  }
  const PlanResult result = plan(config, only, default_thread_count());
  const std::string csv = sweep_csv(result.rows);
  const auto& opt = s.options();
  if (opt.out.empty()) {
    s.print(csv);
    return;
  }
  s.write_file(opt.out, csv);
  s.write_file(sidecar_path(opt.out), result.report.dump(2) + "\n");
  s.print(opt.as_json ? result.report.dump(2) + "\n" : text_report(result.report));
}

RunResult run(const std::vector<std::string>& args, const std::optional<json>& preset_config);

int cmd_replay(const Options& opt) {
  std::ifstream in(opt.replay_manifest);
  if (!in) throw InputError("cannot open manifest '" + opt.replay_manifest + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("manifest is not valid JSON: ") + e.what());
  }
  const RunManifest m = manifest_from_json(doc);
  std::vector<std::string> args = m.args;
  if (!opt.out.empty()) {
    const auto it = std::find(args.begin(), args.end(), "--out");
    if (it != args.end() && it + 1 != args.end()) {
      *(it + 1) = opt.out;
    } else {
      args.insert(args.begin(), {"--out", opt.out});
    }
  }
  if (!opt.manifest.empty()) args.insert(args.begin(), {"--manifest", opt.manifest});
  if (m.tool_version != FPCAV_VERSION) {
    std::cerr << "warning: manifest written by fpcav " << m.tool_version << ", running "
              << FPCAV_VERSION << "\n";
  }
  const RunResult rerun = run(args, m.config);
  if (rerun.code != kOk) return rerun.code;
  bool same = rerun.outputs.size() == m.outputs.size();
  for (std::size_t i = 0; same && i < m.outputs.size(); ++i) {
    same = rerun.outputs[i].fnv1a == m.outputs[i].fnv1a && rerun.outputs[i].bytes == m.outputs[i].bytes;
  }
  if (!same) {
    std::cerr << "replay: outputs differ from the manifest\n";
    return kNumeric;
  }
  std::cerr << "replay: " << m.outputs.size() << " output(s) identical\n";
  return kOk;
}

RunResult run(const std::vector<std::string>& args, const std::optional<json>& preset_config) {
  Options opt;
  CLI::App app{"Fiber-cavity Purcell, spectroscopy and count-rate toolkit", "fpcav"};
  app.set_version_flag("--version", std::string(FPCAV_VERSION));
  app.option_defaults()->always_capture_default();
  app.add_option("--config", opt.config_path, "JSON configuration (default: bundled reference)");
  app.add_option("--seed", opt.seed, "override the configured seed");
  app.add_flag("--json", opt.as_json, "machine-readable report");
  app.add_option("--out", opt.out, "output file");
  app.add_option("--manifest", opt.manifest, "manifest path (default: next to --out)");
  app.require_subcommand(1);
  app.fallthrough();

  auto* cavity = app.add_subcommand("cavity", "cavity geometry and loss figures");
  auto* purcell = app.add_subcommand("purcell", "coupling table and ensemble statistics");
  auto* sim = app.add_subcommand("simulate", "synthetic spectroscopy trace as CSV");
  sim->add_option("kind", opt.sim_kind, "ple | saturation | hole | decay")
      ->required()
      ->check(CLI::IsMember({"ple", "saturation", "hole", "decay"}));
  auto* fitc = app.add_subcommand("fit", "least-squares fit of a CSV trace");
  fitc->add_option("model", opt.fit_model,
                   "lorentzian | inverted_lorentzian | power_law | sqrt_offset | exp_decay | linear")
      ->required();
  fitc->add_option("input", opt.fit_input, "CSV file with header x,y")->required();
  fitc->add_option("--range", opt.fit_range, "fit only XMIN <= x <= XMAX")->expected(2);
  fitc->add_flag("--poisson", opt.fit_poisson, "weights 1/max(y,1)");
  fitc->add_option("--guess", opt.fit_guess, "initial value override, name=value");
  auto* planc = app.add_subcommand("plan", "count-rate sweep and best operating point");
  planc->add_option("--mode", opt.plan_mode, "contact | open_single | open_double");
  auto* replay = app.add_subcommand("replay", "re-run a manifest and compare outputs");
  replay->add_option("manifest", opt.replay_manifest, "manifest JSON")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return {code == 0 ? kOk : kConfig, {}};
  }

  if (replay->parsed()) return {cmd_replay(opt), {}};

  const std::string command = app.get_subcommands().front()->get_name();
  const std::string started = utc_timestamp();

  json doc;
  if (preset_config) {
    doc = *preset_config;
  } else if (!opt.config_path.empty()) {
    doc = load_config_document(opt.config_path);
  } else {
    doc = json::parse(default_config_text());
  }
  if (opt.seed) doc["seed"] = *opt.seed;
  const RunConfig config = parse_config(doc);
  const json resolved = config_to_json(config);

  Session session(opt, command);
  if (cavity->parsed()) cmd_cavity(session, config);
  if (purcell->parsed()) cmd_purcell(session, config);
  if (sim->parsed()) cmd_simulate(session, config);
  if (fitc->parsed()) cmd_fit(session);
  if (planc->parsed()) cmd_plan(session, config);

  RunManifest m;
  m.tool_version = FPCAV_VERSION;
  m.command = command;
  m.args = strip_config_args(args);
  m.seed = config.seed;
  m.config = resolved;
  m.config_hash = hex64(fnv1a64(resolved.dump()));
  m.started_utc = started;
  m.outputs = session.finish();
  m.finished_utc = utc_timestamp();
  write_json_file(manifest_path(opt, command), manifest_to_json(m));
  return {kOk, m.outputs};
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run(args, std::nullopt).code;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const DomainError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kConfig;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumeric;
  }
}
