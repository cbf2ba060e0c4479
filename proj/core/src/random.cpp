#include "sma/random.hpp"

#include <random>

#include "sma/errors.hpp"

namespace sma {

std::uint64_t binomial(Rng& rng, std::uint64_t trials, double prob) {
  if (trials == 0 || prob <= 0.0) return 0;
  if (prob >= 1.0) return trials;
  // Fresh distribution per call: libstdc++ caches a spare normal deviate inside
  // the object, which would leak state between independent streams.
  std::binomial_distribution<long long> dist(static_cast<long long>(trials), prob);
  return static_cast<std::uint64_t>(dist(rng));
}

void sample_distinct(Rng& rng, std::uint32_t n, std::uint32_t k, std::vector<std::uint32_t>& out,
                     SampleScratch& scratch) {
  if (k > n) throw UsageError("cannot sample more distinct items than the population");
  if (scratch.capacity() < n) throw UsageError("sample scratch too small");
  auto& bits = scratch.bits_;
  const std::size_t first = out.size();
  for (std::uint32_t j = n - k; j < n; ++j) {
    std::uint32_t t = uniform_below(rng, std::uint64_t{j} + 1);
    if ((bits[t >> 6] >> (t & 63)) & 1U) t = j;
    bits[t >> 6] |= std::uint64_t{1} << (t & 63);
    out.push_back(t);
  }
  for (std::size_t i = first; i < out.size(); ++i) {
    bits[out[i] >> 6] &= ~(std::uint64_t{1} << (out[i] & 63));
  }
}

std::vector<std::uint32_t> sample_distinct(Rng& rng, std::uint32_t n, std::uint32_t k) {
  SampleScratch scratch(n);
  std::vector<std::uint32_t> out;
  out.reserve(k);
  sample_distinct(rng, n, k, out, scratch);
  return out;
}

}  // namespace sma
