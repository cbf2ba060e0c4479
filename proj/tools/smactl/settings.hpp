#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace smactl {

// Flat key-value configuration. Keys mirror the long flag names.
using Settings = std::map<std::string, std::string>;

Settings default_settings();

// paper-fig1a or paper-fig1b; throws sma::UsageError otherwise.
Settings preset_settings(const std::string& name);

// A run manifest (its "config" object is used) or a key=value file with
// '#' comments.
Settings read_config_file(const std::string& path);

// Later layers override earlier ones.
Settings merge(const Settings& base, const Settings& over);

// Typed access; every getter throws sma::UsageError naming the key when the
// value is missing or malformed.
bool has(const Settings& s, const std::string& key);
std::string get_string(const Settings& s, const std::string& key);
double get_double(const Settings& s, const std::string& key);
std::size_t get_size(const Settings& s, const std::string& key);
bool get_bool(const Settings& s, const std::string& key);
std::vector<double> get_double_list(const Settings& s, const std::string& key);
std::vector<std::size_t> get_size_list(const Settings& s, const std::string& key);

// "random" is replaced by a fresh 64-bit value; the resolved number is
// written back so manifests always carry a concrete seed.
std::uint64_t resolve_seed(Settings& s);
unsigned resolve_threads(const Settings& s);

}  // namespace smactl
