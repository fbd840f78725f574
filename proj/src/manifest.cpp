#include "genre/manifest.hpp"

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace genre {

namespace {

uint64_t fnv1a_bytes(const char* data, size_t n, uint64_t h) {
  for (size_t i = 0; i < n; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= 1099511628211ull;
  }
  return h;
}

std::string to_hex(uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace

std::string hash_string(const std::string& content) {
  return to_hex(fnv1a_bytes(content.data(), content.size(), 14695981039346656037ull));
}

std::string hash_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot hash missing file: " + path);
  uint64_t h = 14695981039346656037ull;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    h = fnv1a_bytes(buf, static_cast<size_t>(in.gcount()), h);
  }
  return to_hex(h);
}

std::string now_utc_iso8601() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void append_manifest(const std::string& path, const RunManifest& manifest) {
  nlohmann::json j;
  j["command"] = manifest.command;
  j["config_hash"] = manifest.config_hash;
  j["tool_version"] = kToolVersion;
  j["seeds"] = manifest.seeds;
  j["started_at"] = manifest.started_at;
  j["finished_at"] = manifest.finished_at;
  nlohmann::json inputs = nlohmann::json::object();
  for (const auto& [p, h] : manifest.input_hashes) inputs[p] = h;
  j["inputs"] = inputs;
  nlohmann::json outputs = nlohmann::json::object();
  for (const auto& [p, h] : manifest.output_hashes) outputs[p] = h;
  j["outputs"] = outputs;
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot append manifest: " + path);
  out << j.dump() << "\n";
}

}  // namespace genre
