#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace riskalloc {

inline constexpr const char* kToolVersion = "0.3.0";

/// Inputs that determine a run, plus where its outputs went. Runs with equal
/// checksums and tool version produce byte-identical artifacts; the timestamp
/// is informational only.
struct RunManifest {
  std::string command;
  std::string tool_version = kToolVersion;
  std::string timestamp;  // UTC, ISO-8601
  std::vector<std::pair<std::string, std::string>> config_checksums;  // path, sha256
  std::vector<std::pair<std::string, std::string>> data_checksums;
  std::vector<std::string> outputs;
};

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

std::string utc_timestamp();

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

}  // namespace riskalloc
