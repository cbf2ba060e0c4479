#include "smactl/output.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>

#include "json.hpp"
#include "sma/errors.hpp"

namespace smactl {

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw std::runtime_error("cannot format number");
  return std::string(buf.data(), ptr);
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm parts{};
  gmtime_r(&now, &parts);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &parts);
  return buf;
}

OutputFile write_output(const std::filesystem::path& dir, const std::string& name,
                        const std::string& content) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  const auto path = dir / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return {name, sha256_hex(content), content.size()};
}

void write_manifest(const std::filesystem::path& dir, const Manifest& m) {
  nlohmann::ordered_json doc;
  doc["tool"] = "smactl";
  doc["version"] = SMACTL_VERSION;
  doc["command"] = m.command;
  doc["master_seed"] = m.seed;
  doc["threads"] = m.threads;
  doc["started_at"] = m.started_at;
  doc["finished_at"] = m.finished_at;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m.config) config[k] = v;
  doc["config"] = config;
  doc["outputs"] = nlohmann::ordered_json::array();
  for (const auto& f : m.outputs) {
    doc["outputs"].push_back({{"file", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  }
  doc["warnings"] = m.warnings;
  write_output(dir, m.command + ".manifest.json", doc.dump(2) + "\n");
}

}  // namespace smactl
