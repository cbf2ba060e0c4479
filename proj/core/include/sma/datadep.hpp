#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sma/bitvector.hpp"
#include "sma/seed.hpp"

namespace sma {

// A finite item set S_n with its minimum pairwise Hamming distance cached.
class InputSet {
 public:
  // Throws UsageError on an empty set, mixed lengths or duplicate items.
  InputSet(std::size_t n, std::vector<BitVector> items);

  std::size_t length() const noexcept { return n_; }
  std::size_t size() const noexcept { return items_.size(); }
  const std::vector<BitVector>& items() const noexcept { return items_; }
  const BitVector& operator[](std::size_t i) const { return items_[i]; }
  // n + 1 for a single item (no pairs).
  std::size_t min_pairwise_distance() const noexcept { return min_distance_; }

 private:
  std::size_t n_;
  std::vector<BitVector> items_;
  std::size_t min_distance_;
};

// Images of the items of an InputSet, all of weight r_n.
struct OrthogonalMap {
  std::vector<BitVector> assignments;
  std::uint64_t attempts_used = 0;
};

struct SearchResult {
  bool success = false;
  OrthogonalMap map;  // on failure, the items placed before the budget ran out
  std::size_t placed = 0;
};

// Greedy rejection search for a map into T_n^{(r_n)} with every pairwise
// output distance strictly above b_n. Items are placed in order; each image
// is drawn uniformly from the sphere and redrawn while it is within b_n of an
// image already placed. max_attempts bounds the total number of draws.
SearchResult search_orthogonal_map(const InputSet& s, std::size_t r_n, std::size_t b_n,
                                   std::uint64_t max_attempts, const SeedPath& seed);

struct MapViolation {
  enum class Kind { weight, gap };
  Kind kind;
  std::size_t first;
  std::size_t second;  // equals first for weight violations
  std::size_t value;   // offending weight or distance
};

struct MapCheck {
  bool ok = true;
  std::vector<MapViolation> violations;
};

// Recomputes every weight and pairwise distance. A map whose size or lengths
// do not match the input set is rejected with a UsageError.
MapCheck verify_map(const OrthogonalMap& m, const InputSet& s, std::size_t r_n, std::size_t b_n);

// 8 r_n / A_n, the Lipschitz constant the extension to the whole cube would
// carry. Reported only; the extension itself is not constructed.
double extension_lipschitz_constant(std::size_t r_n, std::size_t a_n);

}  // namespace sma
