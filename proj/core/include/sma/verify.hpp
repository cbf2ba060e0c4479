#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sma/seed.hpp"

// Executable checks of the library against its analytic predictions. The
// numbered criteria are shared by `smactl verify` and the acceptance test.
namespace sma::verify {

struct CheckRow {
  std::string name;
  double empirical = 0.0;
  double analytic = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct VerifyOptions {
  // Replaces the default Monte Carlo trial count of every check when set.
  std::optional<std::size_t> trials;
  std::uint64_t seed = kDefaultMasterSeed;
  unsigned threads = 1;
};

struct Criterion {
  int id = 0;
  std::string title;
  std::vector<CheckRow> rows;

  bool pass() const;
};

inline constexpr int kCriterionCount = 10;

// Criteria 1 to 10; throws UsageError for any other id.
Criterion run_criterion(int id, const VerifyOptions& opts);

// lemmas, selectflip, neural, datadep or all. Throws UsageError on an
// unknown name.
std::vector<CheckRow> run_suite(const std::string& suite, const VerifyOptions& opts);

const std::vector<std::string>& suite_names();

}  // namespace sma::verify
