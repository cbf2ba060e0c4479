#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "smactl/app.hpp"
#include "smactl/output.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "smactl");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = smactl::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("smactl-test-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::vector<std::string> cells;
    std::istringstream cols(line);
    std::string cell;
    while (std::getline(cols, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string value_of(const std::string& report, const std::string& key) {
  std::istringstream lines(report);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind(key + ": ", 0) == 0) return line.substr(key.size() + 2);
  }
  return {};
}

const std::vector<std::string> kSmall = {"--n", "3000", "--p", "0.03", "--trials", "3"};

std::vector<std::string> with(std::vector<std::string> base, const std::vector<std::string>& more) {
  base.insert(base.end(), more.begin(), more.end());
  return base;
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run_cli({"--help"}).code == 0);
  CHECK(run_cli({"stability", "--help"}).code == 0);
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({"stability", "--n"}).code == 2);
  CHECK(run_cli({"stability", "--n", "ten"}).code == 2);
  CHECK(run_cli({"stability", "--preset", "nope"}).code == 2);
  CHECK(run_cli({"stability", "--config", "/nonexistent/config"}).code == 2);
  CHECK(run_cli({"verify", "nope"}).code == 2);
  CHECK(run_cli({"bounds", "theorem9"}).code == 2);
  CHECK(run_cli({"bounds", "theorem3", "--n", "1000", "--r", "100"}).code == 2);
  CHECK(run_cli({"bounds", "lemma1", "--m", "1000000", "--p", "0.01"}).code == 1);
}

TEST_CASE("bounds reports") {
  auto r = run_cli({"bounds", "theorem3", "--n", "1000", "--r", "100", "--b", "80"});
  REQUIRE(r.code == 0);
  CHECK(value_of(r.out, "bound") == "theorem3");
  CHECK(value_of(r.out, "log_domain") == "yes");
  CHECK(value_of(r.out, "asserted") == "yes");
  CHECK(std::stod(value_of(r.out, "value")) == doctest::Approx(179.133).epsilon(1e-5));

  r = run_cli({"bounds", "lemma3", "--wx", "1000", "--wy", "1000", "--overlap", "1000"});
  REQUIRE(r.code == 0);
  CHECK(value_of(r.out, "value") == "0");

  r = run_cli({"bounds", "theorem1", "--eps", "1e-6", "--slack", "0.1"});
  CHECK(value_of(r.out, "value") == "100");
  CHECK(value_of(r.out, "asserted") == "no");
  r = run_cli({"bounds", "theorem2", "--n", "10000", "--rn", "100", "--delta", "0.1", "--mu", "2",
              "--lambda", "1"});
  CHECK(value_of(r.out, "asserted") == "no");
  CHECK(value_of(r.out, "log_domain") == "yes");

  r = run_cli({"bounds", "theorem5", "--n", "100000", "--rn", "1500", "--s0", "0.05", "--gamma",
              "0.92", "--eps", "0.05"});
  CHECK(r.code == 2);
  CHECK(r.err.find("minimum feasible epsilon") != std::string::npos);
  CHECK(r.err.find("11.85") != std::string::npos);
  r = run_cli({"bounds", "theorem5", "--n", "100000", "--rn", "1500", "--s0", "0.05", "--gamma",
              "0.92", "--eps", "12"});
  CHECK(r.code == 0);
  CHECK(r.out.find("two-sided") != std::string::npos);

  r = run_cli({"bounds", "network", "--n", "100000", "--p", "0.0025", "--rn", "1500", "--s0", "0.05",
              "--gamma", "0.92"});
  CHECK(std::stod(value_of(r.out, "value")) == doctest::Approx(0.569).epsilon(0.002));

  r = run_cli({"bounds", "lemma4", "--n", "10000", "--c", "0.5", "--p", "0.025", "--eta", "0.1",
              "--json"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["bound"] == "lemma4");
  CHECK(doc["log_domain"] == false);
  CHECK(doc["value"].get<double>() == doctest::Approx(std::acos(0.9) / 3.141592653589793).epsilon(1e-7));
}

TEST_CASE("stability CSV layout and exact round trip") {
  const auto dir = scratch_dir("stability");
  const auto r = run_cli(with(kSmall, {"stability", "--out", dir.string()}));
  // Subcommand must come first; repeat with the proper order.
  CHECK(r.code == 2);
  const auto ok = run_cli(with({"stability", "--out", dir.string()}, kSmall));
  REQUIRE(ok.code == 0);
  const auto text = slurp(dir / "stability.csv");
  const auto rows = csv_rows(text);
  REQUIRE(rows.size() == 11);
  CHECK(text.substr(0, text.find('\n')) == "input_density,layer2_mean,layer2_se,output_mean,output_se,trials");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 6);
    CHECK(rows[i][5] == "3");
    for (const auto& cell : rows[i]) {
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      CHECK(res.ptr == cell.data() + cell.size());
      CHECK(smactl::format_double(v) == cell);
    }
  }
  CHECK(fs::exists(dir / "stability.manifest.json"));
}

TEST_CASE("single-trial runs warn about degenerate errors") {
  const auto dir = scratch_dir("degenerate");
  const auto r = run_cli({"stability", "--n", "2000", "--p", "0.03", "--trials", "1", "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("degenerate") != std::string::npos);
  for (std::size_t i = 1; const auto& row : csv_rows(slurp(dir / "stability.csv"))) {
    if (i++ == 1) continue;
    CHECK(row[2] == "0");
    CHECK(row[4] == "0");
  }
  const auto manifest = nlohmann::json::parse(slurp(dir / "stability.manifest.json"));
  CHECK(manifest["warnings"].size() == 1);
}

TEST_CASE("expansion CSV is sorted and honours the distance list") {
  const auto dir = scratch_dir("expansion");
  auto r = run_cli(with({"expansion", "--out", dir.string(), "--distances", "1,10,100", "--densities",
                        "0.1,0.3"},
                       kSmall));
  REQUIRE(r.code == 0);
  auto rows = csv_rows(slurp(dir / "expansion.csv"));
  REQUIRE(rows.size() == 7);
  CHECK(rows[0] == std::vector<std::string>{"input_density", "L", "expansion_mean", "expansion_se", "trials"});
  CHECK(rows[1][0] == "0.1");
  CHECK(rows[1][1] == "1");
  CHECK(rows[3][1] == "100");
  CHECK(rows[4][0] == "0.3");

  r = run_cli(with({"expansion", "--out", dir.string(), "--distances", "30"}, kSmall));
  REQUIRE(r.code == 0);
  rows = csv_rows(slurp(dir / "expansion.csv"));
  CHECK(rows.size() == 11);
}

TEST_CASE("same seed gives byte-identical output at any thread count") {
  const auto a = scratch_dir("same-a");
  const auto b = scratch_dir("same-b");
  REQUIRE(run_cli(with({"expansion", "--out", a.string(), "--threads", "1"}, kSmall)).code == 0);
  REQUIRE(run_cli(with({"expansion", "--out", b.string(), "--threads", "8"}, kSmall)).code == 0);
  CHECK(slurp(a / "expansion.csv") == slurp(b / "expansion.csv"));
  REQUIRE(run_cli(with({"expansion", "--out", b.string(), "--seed", "12345"}, kSmall)).code == 0);
  CHECK(slurp(a / "expansion.csv") != slurp(b / "expansion.csv"));
}

TEST_CASE("manifest lists outputs with digests and replays them") {
  const auto a = scratch_dir("manifest-a");
  const auto b = scratch_dir("manifest-b");
  REQUIRE(run_cli(with({"stability", "--out", a.string(), "--seed", "random"}, kSmall)).code == 0);
  const auto manifest = nlohmann::json::parse(slurp(a / "stability.manifest.json"));
  CHECK(manifest["config"]["seed"] != "random");
  CHECK(manifest["master_seed"].get<std::uint64_t>() ==
        std::stoull(manifest["config"]["seed"].get<std::string>()));
  const auto csv = slurp(a / "stability.csv");
  REQUIRE(manifest["outputs"].size() == 1);
  CHECK(manifest["outputs"][0]["file"] == "stability.csv");
  CHECK(manifest["outputs"][0]["sha256"] == smactl::sha256_hex(csv));
  CHECK(manifest["outputs"][0]["bytes"] == csv.size());

  const auto replay = run_cli({"stability", "--config", (a / "stability.manifest.json").string(), "--out",
                              b.string(), "--threads", "8"});
  REQUIRE(replay.code == 0);
  CHECK(slurp(b / "stability.csv") == csv);
}

TEST_CASE("configuration precedence") {
  const auto dir = scratch_dir("precedence");
  const auto config = dir / "run.cfg";
  {
    std::ofstream out(config);
    out << "# overrides the preset\n"
        << "n = 2000\n"
        << "p = 0.04\n"
        << "--trials = 2\n"
        << "densities = 0.2, 0.4\n";
  }
  REQUIRE(run_cli({"stability", "--preset", "paper-fig1a", "--config", config.string(), "--trials", "3",
                  "--out", dir.string()})
              .code == 0);
  const auto m = nlohmann::json::parse(slurp(dir / "stability.manifest.json"));
  CHECK(m["config"]["n"] == "2000");             // config over preset
  CHECK(m["config"]["trials"] == "3");           // flag over config
  CHECK(m["config"]["c2"] == "0.57");            // preset value kept
  CHECK(m["config"]["allocator"] == "neural");   // default
  CHECK(csv_rows(slurp(dir / "stability.csv")).size() == 3);

  REQUIRE(run_cli({"stability", "--preset", "paper-fig1a", "--n", "2000", "--p", "0.04", "--trials", "1",
                  "--densities", "0.3", "--out", dir.string()})
              .code == 0);
  const auto m2 = nlohmann::json::parse(slurp(dir / "stability.manifest.json"));
  CHECK(m2["config"]["n"] == "2000");
  CHECK(m2["config"]["trials"] == "1");
}

TEST_CASE("verify reports per-check rows") {
  auto r = run_cli({"verify", "lemmas", "--trials", "100000"});
  CHECK(r.code == 0);
  CHECK(r.out.find("4 of 4 checks passed") != std::string::npos);
  r = run_cli({"verify", "datadep", "--trials", "10"});
  CHECK(r.code == 0);
  r = run_cli({"verify", "selectflip"});
  CHECK(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  bool seen = false;
  while (std::getline(lines, line)) {
    if (line.find("continuity failures") == std::string::npos) continue;
    std::istringstream cols(line.substr(line.find(')') + 1));
    double failures = -1.0;
    cols >> failures;
    CHECK(failures == 0.0);
    seen = true;
  }
  CHECK(seen);
}

TEST_CASE("datadep command") {
  const auto r = run_cli({"datadep", "--seed", "3"});
  REQUIRE(r.code == 0);
  CHECK(value_of(r.out, "success") == "yes");
  CHECK(value_of(r.out, "verified") == "yes");
  CHECK(value_of(r.out, "violations") == "0");
  const auto hard = run_cli({"datadep", "--n", "40", "--rn", "4", "--b", "7", "--items", "30", "--attempts", "200"});
  CHECK(hard.code == 1);
  CHECK(value_of(hard.out, "success") == "no");
}
