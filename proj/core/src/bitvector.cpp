#include "sma/bitvector.hpp"

#include <bit>
#include <cmath>

#include "sma/errors.hpp"
#include "sma/random.hpp"
#include "sma/seed.hpp"

namespace sma {

namespace {

std::size_t word_count(std::size_t n) { return (n + 63) / 64; }

void check_same_length(const BitVector& x, const BitVector& y) {
  if (x.size() != y.size()) {
    throw UsageError("bit vectors differ in length: " + std::to_string(x.size()) + " vs " +
                     std::to_string(y.size()));
  }
}

}  // namespace

BitVector::BitVector(std::size_t n) : n_(n), words_(word_count(n), 0) {}

BitVector BitVector::ones(std::size_t n) {
  BitVector v(n);
  for (auto& w : v.words_) w = ~std::uint64_t{0};
  if (n % 64 != 0) v.words_.back() = (std::uint64_t{1} << (n % 64)) - 1;
  v.weight_ = n;
  return v;
}

BitVector BitVector::from_string(std::string_view bits) {
  BitVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      v.set(i);
    } else if (bits[i] != '0') {
      throw UsageError("bit string may only contain '0' and '1'");
    }
  }
  return v;
}

void BitVector::set(std::size_t i, bool value) noexcept {
  const std::uint64_t mask = std::uint64_t{1} << (i & 63);
  std::uint64_t& w = words_[i >> 6];
  const bool old = (w & mask) != 0;
  if (old == value) return;
  w ^= mask;
  weight_ += value ? 1 : -1;
}

void BitVector::flip(std::size_t i) noexcept { set(i, !test(i)); }

std::string BitVector::to_string() const {
  std::string s(n_, '0');
  for (std::size_t i = 0; i < n_; ++i) {
    if (test(i)) s[i] = '1';
  }
  return s;
}

BitVectorBuilder::BitVectorBuilder(std::size_t n) : v_(n) {}

BitVector BitVectorBuilder::finish() && {
  if (v_.n_ % 64 != 0 && !v_.words_.empty()) {
    v_.words_.back() &= (std::uint64_t{1} << (v_.n_ % 64)) - 1;
  }
  std::size_t w = 0;
  for (auto word : v_.words_) w += static_cast<std::size_t>(std::popcount(word));
  v_.weight_ = w;
  return std::move(v_);
}

std::size_t hamming_distance(const BitVector& x, const BitVector& y) {
  check_same_length(x, y);
  const auto a = x.words();
  const auto b = y.words();
  std::size_t sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += static_cast<std::size_t>(std::popcount(a[i] ^ b[i]));
  }
  return sum;
}

std::size_t overlap(const BitVector& x, const BitVector& y) {
  check_same_length(x, y);
  const auto a = x.words();
  const auto b = y.words();
  std::size_t sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += static_cast<std::size_t>(std::popcount(a[i] & b[i]));
  }
  return sum;
}

BitVector random_bitvector(std::size_t n, double density, const SeedPath& seed) {
  if (!(density >= 0.0 && density <= 1.0)) {
    throw UsageError("density must lie in [0, 1]");
  }
  Rng rng = seed.rng();
  BitVectorBuilder out(n);
  if (density == 0.5) {
    // Every bit of a SplitMix64 word is a fair coin.
    for (auto& w : out.words()) w = rng();
  } else if (density > 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      if (bernoulli(rng, density)) out.set(i);
    }
  }
  return std::move(out).finish();
}

std::pair<BitVector, BitVector> random_pair_at_distance(std::size_t n, double density,
                                                        std::size_t distance,
                                                        const SeedPath& seed) {
  if (distance > n) {
    throw UsageError("distance " + std::to_string(distance) + " exceeds length " +
                     std::to_string(n));
  }
  BitVector x = random_bitvector(n, density, seed.child("base"));
  BitVector y = x;
  Rng rng = seed.child("toggle", distance).rng();
  for (auto i : sample_distinct(rng, static_cast<std::uint32_t>(n),
                                static_cast<std::uint32_t>(distance))) {
    y.flip(i);
  }
  return {std::move(x), std::move(y)};
}

}  // namespace sma
