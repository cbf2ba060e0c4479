#include "sma/datadep.hpp"

#include <algorithm>

#include "sma/errors.hpp"
#include "sma/random.hpp"

namespace sma {

InputSet::InputSet(std::size_t n, std::vector<BitVector> items)
    : n_(n), items_(std::move(items)), min_distance_(n + 1) {
  if (items_.empty()) throw UsageError("input set must not be empty");
  for (const auto& x : items_) {
    if (x.size() != n_) throw UsageError("input set items must all have length n");
  }
  for (std::size_t i = 0; i < items_.size(); ++i) {
    for (std::size_t j = i + 1; j < items_.size(); ++j) {
      const std::size_t d = hamming_distance(items_[i], items_[j]);
      if (d == 0) throw UsageError("input set items must be distinct");
      min_distance_ = std::min(min_distance_, d);
    }
  }
}

SearchResult search_orthogonal_map(const InputSet& s, std::size_t r_n, std::size_t b_n,
                                   std::uint64_t max_attempts, const SeedPath& seed) {
  const std::size_t n = s.length();
  if (r_n == 0 || r_n > n) throw UsageError("requires 0 < r_n <= n");
  if (b_n > 2 * r_n) throw UsageError("requires b_n <= 2 r_n");
  if (max_attempts == 0) throw UsageError("max_attempts must be positive");

  SearchResult result;
  Rng rng = seed.child("draw").rng();
  SampleScratch scratch(n);
  std::vector<std::uint32_t> support;

  while (result.placed < s.size() && result.map.attempts_used < max_attempts) {
    ++result.map.attempts_used;
    support.clear();
    sample_distinct(rng, static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(r_n), support,
                    scratch);
    BitVectorBuilder image(n);
    for (auto i : support) image.set(i);
    BitVector candidate = std::move(image).finish();
    const bool fits = std::all_of(result.map.assignments.begin(), result.map.assignments.end(),
                                  [&](const BitVector& placed) {
                                    return hamming_distance(candidate, placed) > b_n;
                                  });
    if (fits) {
      result.map.assignments.push_back(std::move(candidate));
      ++result.placed;
    }
  }
  result.success = result.placed == s.size();
  return result;
}

MapCheck verify_map(const OrthogonalMap& m, const InputSet& s, std::size_t r_n, std::size_t b_n) {
  if (m.assignments.size() != s.size()) throw UsageError("map and input set differ in size");
  MapCheck check;
  for (std::size_t i = 0; i < m.assignments.size(); ++i) {
    if (m.assignments[i].size() != s.length()) throw UsageError("image length differs from n");
    const std::size_t w = m.assignments[i].weight();
    if (w != r_n) check.violations.push_back({MapViolation::Kind::weight, i, i, w});
  }
  for (std::size_t i = 0; i < m.assignments.size(); ++i) {
    for (std::size_t j = i + 1; j < m.assignments.size(); ++j) {
      const std::size_t d = hamming_distance(m.assignments[i], m.assignments[j]);
      if (d <= b_n) check.violations.push_back({MapViolation::Kind::gap, i, j, d});
    }
  }
  check.ok = check.violations.empty();
  return check;
}

double extension_lipschitz_constant(std::size_t r_n, std::size_t a_n) {
  if (a_n == 0) throw UsageError("requires A_n > 0");
  return 8.0 * static_cast<double>(r_n) / static_cast<double>(a_n);
}

}  // namespace sma
