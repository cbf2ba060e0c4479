#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace sma {

// SplitMix64. One word of state, so seeding a fresh stream per matrix row is
// free. Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// Unbiased integer in [0, bound) (Lemire's multiply-shift with rejection).
// bound must be in [1, 2^32].
inline std::uint32_t uniform_below(Rng& rng, std::uint64_t bound) noexcept {
  std::uint64_t m = (rng() & 0xFFFFFFFFULL) * bound;
  auto low = static_cast<std::uint32_t>(m);
  if (low < bound) {
    const auto threshold = static_cast<std::uint32_t>((std::uint64_t{1} << 32) % bound);
    while (low < threshold) {
      m = (rng() & 0xFFFFFFFFULL) * bound;
      low = static_cast<std::uint32_t>(m);
    }
  }
  return static_cast<std::uint32_t>(m >> 32);
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Exact at the endpoints: prob 0 never fires, prob 1 always fires.
inline bool bernoulli(Rng& rng, double prob) noexcept { return uniform01(rng) < prob; }

std::uint64_t binomial(Rng& rng, std::uint64_t trials, double prob);

// Scratch bitmap for repeated sampling without replacement from [0, n).
// Must be all-clear between calls; sample_distinct leaves it clear.
class SampleScratch {
 public:
  explicit SampleScratch(std::size_t n) : bits_((n + 63) / 64, 0) {}
  std::size_t capacity() const noexcept { return bits_.size() * 64; }

 private:
  friend void sample_distinct(Rng&, std::uint32_t, std::uint32_t, std::vector<std::uint32_t>&,
                              SampleScratch&);
  std::vector<std::uint64_t> bits_;
};

// Appends a uniformly random k-subset of [0, n) to `out` (Floyd's algorithm;
// exactly k draws). The order of the appended elements is not uniform.
void sample_distinct(Rng& rng, std::uint32_t n, std::uint32_t k, std::vector<std::uint32_t>& out,
                     SampleScratch& scratch);

std::vector<std::uint32_t> sample_distinct(Rng& rng, std::uint32_t n, std::uint32_t k);

}  // namespace sma
