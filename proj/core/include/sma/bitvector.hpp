#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sma {

class SeedPath;

// Fixed-length binary vector packed into 64-bit words. The number of one
// bits (|x|, the activity level) is cached and kept in sync by every mutator.
// Bits past size() in the last word are always zero.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t n);

  static BitVector ones(std::size_t n);
  // Parses a string of '0'/'1' characters, index 0 first.
  static BitVector from_string(std::string_view bits);

  std::size_t size() const noexcept { return n_; }
  std::size_t weight() const noexcept { return weight_; }
  double density() const noexcept {
    return n_ == 0 ? 0.0 : static_cast<double>(weight_) / static_cast<double>(n_);
  }

  bool test(std::size_t i) const noexcept {
    return (words_[i >> 6] >> (i & 63)) & 1U;
  }
  void set(std::size_t i, bool value = true) noexcept;
  void flip(std::size_t i) noexcept;

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  std::string to_string() const;

  friend bool operator==(const BitVector& a, const BitVector& b) noexcept {
    return a.n_ == b.n_ && a.words_ == b.words_;
  }

 private:
  friend class BitVectorBuilder;

  std::size_t n_ = 0;
  std::size_t weight_ = 0;
  std::vector<std::uint64_t> words_;
};

// Word-level construction for hot paths; the weight is recomputed once on
// finish().
class BitVectorBuilder {
 public:
  explicit BitVectorBuilder(std::size_t n);

  std::span<std::uint64_t> words() noexcept { return v_.words_; }
  void set(std::size_t i) noexcept { v_.words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  BitVector finish() &&;

 private:
  BitVector v_;
};

// |{i : x_i != y_i}|. Throws UsageError on length mismatch.
std::size_t hamming_distance(const BitVector& x, const BitVector& y);

// |x AND y|. Throws UsageError on length mismatch.
std::size_t overlap(const BitVector& x, const BitVector& y);

// Each bit is independently one with probability `density`.
BitVector random_bitvector(std::size_t n, double density, const SeedPath& seed);

// Draws x at `density`, then toggles a uniformly chosen `distance`-subset of
// positions to form y, so hamming_distance(x, y) == distance exactly. The base
// vector depends only on (n, density, seed), not on `distance`: pairs drawn
// from one seed with different distances share x.
std::pair<BitVector, BitVector> random_pair_at_distance(std::size_t n, double density,
                                                        std::size_t distance,
                                                        const SeedPath& seed);

}  // namespace sma
