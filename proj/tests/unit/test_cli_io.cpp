#include <doctest.h>

#include <fstream>
#include <sstream>

#include "fpcav/commands.hpp"
#include "fpcav/config.hpp"
#include "fpcav/manifest.hpp"
#include "fpcav/report.hpp"
#include "fpcav/trace_io.hpp"

using namespace fpcav;
using doctest::Approx;

namespace {

json paper_document() { return json::parse(default_config_text()); }

std::string path_of_error(const json& doc) {
  try {
    (void)parse_config(doc);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "";
}

void collect_leaves(const json& node, const std::string& prefix, std::map<std::string, double>& out) {
  if (node.is_object()) {
    for (auto it = node.begin(); it != node.end(); ++it) {
      collect_leaves(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    }
  } else if (node.is_number()) {
    out[prefix] = node.get<double>();
  }
}

}  // namespace

TEST_SUITE("cli-io") {

TEST_CASE("bundled config matches the data file") {
  std::ifstream in(FPCAV_SOURCE_DIR "/data/paper.json", std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(json::parse(ss.str()) == paper_document());
  const auto c = default_config();
  CHECK(c.schema_version == kSchemaVersion);
  CHECK(c.primary.transition.wavelength() == 580.8e-9);
  CHECK(c.primary.bare_budget().total_ppm() == Approx(359.0));
  CHECK(c.secondary.bare_budget().total_ppm() == Approx(661.0));
}

TEST_CASE("config round trip") {
  const auto c = default_config();
  const json once = config_to_json(c);
  const json twice = config_to_json(parse_config(once));
  CHECK(once == twice);
}

TEST_CASE("config errors name the offending field") {
  auto doc = paper_document();
  doc["nanoparticle"].erase("diameter");
  CHECK(path_of_error(doc) == "/nanoparticle/diameter");

  doc = paper_document();
  doc["schema_version"] = 99;
  CHECK(path_of_error(doc) == "/schema_version");

  doc = paper_document();
  doc.erase("schema_version");
  CHECK(path_of_error(doc) == "/schema_version");

  doc = paper_document();
  doc["modes"]["contact"]["cavity_length"] = 30e-6;
  CHECK(path_of_error(doc).rfind("/modes/contact", 0) == 0);

  doc = paper_document();
  doc["channels"]["primary"]["transition"]["branching_ratio"] = 2.0;
  CHECK(path_of_error(doc).rfind("/channels/primary/transition", 0) == 0);

  doc = paper_document();
  doc["sweep"]["modes"] = {"contact", "sideways"};
  CHECK(path_of_error(doc).rfind("/sweep/modes", 0) == 0);

  CHECK_THROWS_AS((void)load_config_document("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("trace csv round trip is exact") {
  Trace t;
  t.x = {-1.5e9, 2.0e-12, 0.1, 1.0 / 3.0, 7.0};
  t.y = {0.0, -2.0 / 7.0, 1e300, 5e-324, 3.0};
  std::ostringstream out;
  write_trace_csv(out, t);
  const std::string text = out.str();
  CHECK(text.rfind("x,y\n", 0) == 0);
  CHECK(text.find('\r') == std::string::npos);
  std::istringstream in(text);
  const auto back = read_trace_csv(in);
  CHECK(back.x == t.x);
  CHECK(back.y == t.y);
}

TEST_CASE("malformed csv reports the line") {
  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      (void)read_trace_csv(in);
    } catch (const InputError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("x,y\n1,2\n2,abc\n") == 3);
  CHECK(line_of("x,y\n1,2\n3,4,5\n") == 3);
  CHECK(line_of("x,y\n1,2\n1,3\n") == 3);
  CHECK(line_of("a,b\n1,2\n") == 1);
  CHECK(line_of("x,y\n1,nan\n") == 2);
  std::istringstream crlf("x,y\r\n1,2\r\n2,3\r\n");
  CHECK(read_trace_csv(crlf).size() == 2);
  std::istringstream empty("");
  CHECK_THROWS_AS((void)read_trace_csv(empty), InputError);
}

TEST_CASE("fnv1a and manifest round trip") {
  CHECK(hex64(fnv1a64("")) == "cbf29ce484222325");
  CHECK(hex64(fnv1a64("a")) == "af63dc4c8601ec8c");
  RunManifest m;
  m.tool_version = "0.0.0";
  m.command = "plan";
  m.args = {"plan", "--mode", "contact"};
  m.seed = 5;
  m.config = paper_document();
  m.config_hash = hex64(fnv1a64(m.config.dump()));
  m.started_utc = utc_timestamp();
  m.finished_utc = m.started_utc;
  m.outputs.push_back(record_output("-", "hello\n"));
  const auto back = manifest_from_json(json::parse(manifest_to_json(m).dump()));
  CHECK(back.args == m.args);
  CHECK(back.seed == 5);
  CHECK(back.config == m.config);
  REQUIRE(back.outputs.size() == 1);
  CHECK(back.outputs[0].fnv1a == hex64(fnv1a64("hello\n")));
  CHECK(back.outputs[0].bytes == 6);
  CHECK_THROWS_AS((void)manifest_from_json(json::object()), ConfigError);
}

TEST_CASE("text and json reports agree") {
  const auto report = cavity_report(default_config());
  std::map<std::string, double> leaves;
  collect_leaves(report, "", leaves);
  std::istringstream text(text_report(report));
  std::string line;
  std::size_t matched = 0;
  while (std::getline(text, line)) {
    const auto split = line.find("  ");
    REQUIRE(split != std::string::npos);
    const auto key = line.substr(0, split);
    const auto it = leaves.find(key);
    if (it == leaves.end()) continue;
    CHECK(std::stod(line.substr(split + 2)) == Approx(it->second).epsilon(1e-5));
    ++matched;
  }
  CHECK(matched == leaves.size());
  CHECK(format_rounded(std::nan("")) == "n/a");
}

TEST_CASE("cavity report") {
  const auto r = cavity_report(default_config());
  CHECK(r["double_resonance"]["mode_order_1"] == 20);
  CHECK(r["open"]["primary"]["waist"].get<double>() == Approx(1.3970922327e-06).epsilon(1e-9));
  CHECK(r["contact"]["primary"]["waist"].get<double>() == Approx(1.1775219167e-06).epsilon(1e-9));
}

TEST_CASE("purcell report is deterministic") {
  const auto a = purcell_report(default_config(), 1);
  const auto b = purcell_report(default_config(), 5);
  CHECK(a == b);
  CHECK(a["ions"]["total_ions"] == 18118);
}

TEST_CASE("simulations") {
  auto c = default_config();
  const auto decay = simulate(c, SimulationKind::decay);
  CHECK(decay.metadata["effective_lifetime"].get<double>() == Approx(2e-3 / 1.82));
  CHECK(decay.trace.size() == 200);

  c.hole.teeth = 1;
  c.hole.poisson = false;
  const auto hole = simulate(c, SimulationKind::hole);
  for (double v : hole.trace.y) CHECK(v == Approx(hole.trace.y.front()));

  const auto p1 = simulate(default_config(), SimulationKind::ple);
  const auto p2 = simulate(default_config(), SimulationKind::ple);
  std::ostringstream o1, o2;
  write_trace_csv(o1, p1.trace);
  write_trace_csv(o2, p2.trace);
  CHECK(o1.str() == o2.str());
  auto other = default_config();
  other.seed += 1;
  std::ostringstream o3;
  write_trace_csv(o3, simulate(other, SimulationKind::ple).trace);
  CHECK(o3.str() != o1.str());

  CHECK(parse_simulation_kind("saturation") == SimulationKind::saturation);
  CHECK_THROWS((void)parse_simulation_kind("raman"));
}

TEST_CASE("plan output") {
  const auto r = plan(default_config(), OperatingMode::contact, 2);
  const auto& cfg = default_config().sweep;
  CHECK(r.rows.size() ==
        static_cast<std::size_t>(cfg.diameter_points * cfg.repetition_points));
  const auto csv = sweep_csv(r.rows);
  CHECK(csv.rfind("d_np_nm,f_rep_hz,mode,rate_cps,snr\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(r.rows.size()) + 1);
  CHECK(r.report["modes"]["contact"]["best"]["rate_cps"].get<double>() > 0.0);
}

}
