#pragma once

#include <string>
#include <vector>

namespace genre {

inline constexpr const char* kToolVersion = "0.1.0";

// FNV-1a 64-bit hash of a file's bytes, hex-encoded. Used for manifest
// traceability, not integrity against adversaries.
std::string hash_file(const std::string& path);
std::string hash_string(const std::string& content);

struct RunManifest {
  std::string command;
  std::string config_hash;
  std::vector<std::pair<std::string, std::string>> input_hashes;   // path, hash
  std::vector<std::pair<std::string, std::string>> output_hashes;  // path, hash
  std::vector<unsigned> seeds;
  std::string started_at;   // ISO-8601 UTC
  std::string finished_at;
};

std::string now_utc_iso8601();

// Appends one JSON line per manifest to `path`.
void append_manifest(const std::string& path, const RunManifest& manifest);

}  // namespace genre
