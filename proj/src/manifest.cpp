#include "fpcav/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

namespace fpcav {

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

OutputRecord record_output(std::string path, std::string_view content) {
  return {std::move(path), hex64(fnv1a64(content)), content.size()};
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json manifest_to_json(const RunManifest& m) {
  json outputs = json::array();
  for (const auto& o : m.outputs) {
    outputs.push_back({{"path", o.path}, {"fnv1a", o.fnv1a}, {"bytes", o.bytes}});
  }
  return json{{"tool_version", m.tool_version}, {"command", m.command},
              {"args", m.args},                 {"seed", m.seed},
              {"config_hash", m.config_hash},   {"config", m.config},
              {"started_utc", m.started_utc},   {"finished_utc", m.finished_utc},
              {"outputs", outputs}};
}

RunManifest manifest_from_json(const json& j) {
  try {
    RunManifest m;
    m.tool_version = j.at("tool_version").get<std::string>();
    m.command = j.at("command").get<std::string>();
    m.args = j.at("args").get<std::vector<std::string>>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.config_hash = j.at("config_hash").get<std::string>();
    m.config = j.at("config");
    m.started_utc = j.value("started_utc", "");
    m.finished_utc = j.value("finished_utc", "");
    for (const auto& o : j.at("outputs")) {
      m.outputs.push_back({o.at("path").get<std::string>(), o.at("fnv1a").get<std::string>(),
                           o.at("bytes").get<std::size_t>()});
    }
    return m;
  } catch (const json::exception& e) {
    throw ConfigError("/manifest", e.what());
  }
}

}  // namespace fpcav
