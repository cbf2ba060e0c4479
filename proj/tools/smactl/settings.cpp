#include "smactl/settings.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "sma/errors.hpp"
#include "sma/seed.hpp"

namespace smactl {

namespace {

std::string trim(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  return text.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* what) {
  throw sma::UsageError("--" + key + ": '" + value + "' is not " + what);
}

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) bad_value(key, text, "a number");
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  int base = 10;
  std::string digits = text;
  if (digits.size() > 2 && digits[0] == '0' && (digits[1] == 'x' || digits[1] == 'X')) {
    base = 16;
    digits = digits.substr(2);
  } else if (digits.find_first_of(".eE") != std::string::npos) {
    // 1e5 style sizes are common on the command line.
    const double d = parse_double(key, text);
    if (d < 0 || d != static_cast<double>(static_cast<std::uint64_t>(d))) {
      bad_value(key, text, "a non-negative integer");
    }
    return static_cast<std::uint64_t>(d);
  }
  const auto* end = digits.data() + digits.size();
  auto [ptr, ec] = std::from_chars(digits.data(), end, v, base);
  if (digits.empty() || ec != std::errc() || ptr != end) bad_value(key, text, "a non-negative integer");
  return v;
}

}  // namespace

Settings default_settings() {
  Settings s;
  s["allocator"] = "neural";
  s["n"] = "100000";
  s["p"] = "0.0025";
  s["c1"] = "0.5";
  s["c2"] = "0.57";
  s["rn"] = "1500";
  s["trials"] = "10";
  s["seed"] = std::to_string(sma::kDefaultMasterSeed);
  s["threads"] = "0";
  s["out"] = ".";
  s["densities"] = "0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4,0.45,0.5";
  s["distances"] = "1,3,10,30,100";
  s["fresh"] = "true";
  s["kappa"] = "0";
  return s;
}

Settings preset_settings(const std::string& name) {
  Settings s;
  if (name != "paper-fig1a" && name != "paper-fig1b") {
    throw sma::UsageError("unknown preset '" + name + "' (expected paper-fig1a or paper-fig1b)");
  }
  s["allocator"] = "neural";
  s["n"] = "100000";
  s["p"] = "0.0025";
  s["c1"] = "0.5";
  s["c2"] = "0.57";
  s["trials"] = "10";
  s["densities"] = "0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4,0.45,0.5";
  if (name == "paper-fig1b") s["distances"] = "1,3,10,30,100";
  return s;
}

Settings read_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw sma::UsageError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  Settings s;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw sma::UsageError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    const auto& cfg = doc.contains("config") ? doc.at("config") : doc;
    if (!cfg.is_object()) throw sma::UsageError("config file '" + path + "' has no config object");
    for (const auto& [key, value] : cfg.items()) {
      s[key] = value.is_string() ? value.get<std::string>() : value.dump();
    }
    return s;
  }

  std::istringstream lines(text);
  std::string line;
  int number = 0;
  while (std::getline(lines, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw sma::UsageError(path + ":" + std::to_string(number) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    s[key] = trim(line.substr(eq + 1));
  }
  return s;
}

Settings merge(const Settings& base, const Settings& over) {
  Settings out = base;
  for (const auto& [k, v] : over) out[k] = v;
  return out;
}

bool has(const Settings& s, const std::string& key) { return s.count(key) != 0; }

std::string get_string(const Settings& s, const std::string& key) {
  const auto it = s.find(key);
  if (it == s.end()) throw sma::UsageError("missing required option --" + key);
  return it->second;
}

double get_double(const Settings& s, const std::string& key) {
  return parse_double(key, get_string(s, key));
}

std::size_t get_size(const Settings& s, const std::string& key) {
  return static_cast<std::size_t>(parse_u64(key, get_string(s, key)));
}

bool get_bool(const Settings& s, const std::string& key) {
  const auto v = get_string(s, key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(key, v, "a boolean");
}

std::vector<double> get_double_list(const Settings& s, const std::string& key) {
  std::vector<double> out;
  for (const auto& item : split(get_string(s, key), ',')) out.push_back(parse_double(key, item));
  return out;
}

std::vector<std::size_t> get_size_list(const Settings& s, const std::string& key) {
  std::vector<std::size_t> out;
  for (const auto& item : split(get_string(s, key), ',')) {
    out.push_back(static_cast<std::size_t>(parse_u64(key, item)));
  }
  return out;
}

std::uint64_t resolve_seed(Settings& s) {
  if (get_string(s, "seed") == "random") {
    std::random_device device;
    const std::uint64_t seed = (std::uint64_t{device()} << 32) ^ device();
    s["seed"] = std::to_string(seed);
  }
  return parse_u64("seed", get_string(s, "seed"));
}

unsigned resolve_threads(const Settings& s) {
  const auto t = get_size(s, "threads");
  if (t == 0) return std::max(1U, std::thread::hardware_concurrency());
  return static_cast<unsigned>(t);
}

}  // namespace smactl
