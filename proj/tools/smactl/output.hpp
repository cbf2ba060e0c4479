#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "smactl/settings.hpp"

namespace smactl {

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

std::string sha256_hex(std::string_view bytes);

// ISO 8601, UTC, second resolution.
std::string utc_timestamp();

struct OutputFile {
  std::string name;  // relative to the output directory
  std::string sha256;
  std::size_t bytes = 0;
};

OutputFile write_output(const std::filesystem::path& dir, const std::string& name,
                        const std::string& content);

struct Manifest {
  std::string command;
  Settings config;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string started_at;
  std::string finished_at;
  std::vector<OutputFile> outputs;
  std::vector<std::string> warnings;
};

// Writes <dir>/<command>.manifest.json.
void write_manifest(const std::filesystem::path& dir, const Manifest& m);

}  // namespace smactl
