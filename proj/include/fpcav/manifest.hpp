#pragma once

// Run manifests: enough to re-run a command and check that it reproduces
// the recorded outputs byte for byte.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fpcav/serialize.hpp"

namespace fpcav {

[[nodiscard]] std::uint64_t fnv1a64(std::string_view bytes) noexcept;
[[nodiscard]] std::string hex64(std::uint64_t v);

struct OutputRecord {
  std::string path;  // "-" for standard output
  std::string fnv1a;
  std::size_t bytes = 0;
};

struct RunManifest {
  std::string tool_version;
  std::string command;
  /// Command-line arguments after the program name, minus --config.
  std::vector<std::string> args;
  std::uint64_t seed = 0;
  std::string config_hash;
  json config;
  std::string started_utc;
  std::string finished_utc;
  std::vector<OutputRecord> outputs;
};

[[nodiscard]] OutputRecord record_output(std::string path, std::string_view content);
[[nodiscard]] std::string utc_timestamp();

[[nodiscard]] json manifest_to_json(const RunManifest& m);
/// Throws ConfigError on a malformed manifest.
[[nodiscard]] RunManifest manifest_from_json(const json& j);

}  // namespace fpcav
