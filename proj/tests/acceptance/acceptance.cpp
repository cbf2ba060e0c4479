// Runs every acceptance criterion and prints one PASS/FAIL line for each.
// Details of failing checks go to stderr. Exit status is 1 if any fails.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "sma/verify.hpp"
#include "smactl/app.hpp"

namespace fs = std::filesystem;

namespace {

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "smactl");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  return smactl::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Runs a command once to obtain a manifest, then replays that manifest twice
// at one thread and twice at eight, comparing every listed output file.
Outcome replay(const fs::path& root, const std::string& command, std::vector<std::string> args) {
  Outcome o;
  const auto base = root / (command + "-base");
  fs::create_directories(base);
  args.insert(args.begin(), command);
  args.push_back("--out");
  args.push_back(base.string());
  args.push_back("--threads");
  args.push_back("1");
  if (run_cli(args) != 0) return {false, command + ": base run failed"};
  const auto manifest_path = base / (command + ".manifest.json");
  const auto manifest = nlohmann::json::parse(slurp(manifest_path));
  std::vector<std::string> files;
  for (const auto& f : manifest["outputs"]) files.push_back(f["file"].get<std::string>());
  if (files.empty()) return {false, command + ": manifest lists no outputs"};

  std::vector<std::string> extra;
  if (command == "bounds") extra = {manifest["config"]["name"].get<std::string>()};
  if (command == "verify") extra = {manifest["config"]["suite"].get<std::string>()};
  int copy = 0;
  for (const char* threads : {"1", "1", "8", "8"}) {
    const auto dir = root / (command + "-" + std::to_string(copy++));
    fs::create_directories(dir);
    std::vector<std::string> again{command};
    again.insert(again.end(), extra.begin(), extra.end());
    for (const std::string& a : {std::string("--config"), manifest_path.string(), std::string("--out"),
                                 dir.string(), std::string("--threads"), std::string(threads)}) {
      again.push_back(a);
    }
    if (run_cli(again) != 0) return {false, command + ": replay failed"};
    for (const auto& f : files) {
      if (slurp(dir / f) != slurp(base / f)) {
        o.pass = false;
        o.detail += command + ": " + f + " differs at " + threads + " thread(s); ";
      }
    }
  }
  return o;
}

Outcome determinism() {
  const auto root = fs::temp_directory_path() / "sma-acceptance-determinism";
  fs::remove_all(root);
  const std::vector<std::string> small{"--n", "4000", "--p", "0.03", "--trials", "4"};
  Outcome all;
  auto merge = [&](const Outcome& o) {
    all.pass = all.pass && o.pass;
    all.detail += o.detail;
  };
  merge(replay(root, "stability", small));
  merge(replay(root, "expansion", small));
  merge(replay(root, "bounds", {"theorem3", "--n", "1000", "--rn", "100", "--b", "80"}));
  merge(replay(root, "verify", {"lemmas", "--trials", "100000"}));
  merge(replay(root, "datadep", {}));
  fs::remove_all(root);
  return all;
}

}  // namespace

int main() {
  sma::verify::VerifyOptions opts;
  opts.threads = std::max(1U, std::thread::hardware_concurrency());
  bool ok = true;
  for (int id = 1; id <= sma::verify::kCriterionCount; ++id) {
    const auto c = sma::verify::run_criterion(id, opts);
    const bool pass = c.pass();
    ok = ok && pass;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << id << ": " << c.title << std::endl;
    for (const auto& r : c.rows) {
      if (r.pass) continue;
      std::cerr << "  " << r.name << ": empirical " << r.empirical << ", analytic " << r.analytic
                << ", tolerance " << r.tolerance << (r.note.empty() ? "" : ", " + r.note) << "\n";
    }
  }
  const auto d = determinism();
  ok = ok && d.pass;
  std::cout << (d.pass ? "PASS" : "FAIL")
            << " criterion 11: identical outputs from a replayed manifest at 1 and 8 threads" << std::endl;
  if (!d.pass) std::cerr << "  " << d.detail << "\n";
  return ok ? 0 : 1;
}
