#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace idslab::app {

/// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

struct RunManifest {
  nlohmann::json config_echo;
  std::string artifact_version;
  std::string timestamp;
  std::map<std::string, std::string> checksums;  // file name -> sha256
  std::map<std::string, std::string> diagnostic_flags;  // experiment -> pass/fail/warn

  nlohmann::json to_json() const;
};

/// Checksums the listed files in `dir` and writes manifest.json last.
RunManifest write_manifest(const std::filesystem::path& dir, const std::vector<std::string>& files,
                           const nlohmann::json& config_echo, const std::map<std::string, std::string>& flags);

std::string utc_timestamp();
std::string artifact_version();

}  // namespace idslab::app
