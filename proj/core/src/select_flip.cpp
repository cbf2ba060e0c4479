#include "sma/select_flip.hpp"

#include "sma/errors.hpp"
#include "sma/random.hpp"

namespace sma {

void SmaParams::validate(std::size_t n) const {
  if (!(delta >= 0.0 && delta < 1.0)) throw UsageError("delta must lie in [0, 1)");
  if (!(mu > 0.0)) throw UsageError("mu must be positive");
  if (!(kappa >= 0.0 && kappa < 1.0)) throw UsageError("kappa must lie in [0, 1)");
  if (r_n == 0 || a_n == 0 || b_n == 0) throw UsageError("a_n, b_n and r_n must be positive");
  if (a_n > n) throw UsageError("a_n must not exceed n");
  if (static_cast<double>(b_n) > 2.0 * static_cast<double>(r_n) * (1.0 + delta)) {
    throw UsageError("b_n must satisfy b_n <= 2 r_n (1 + delta)");
  }
}

bool SmaParams::stable_weight(std::size_t w) const noexcept {
  const double r = static_cast<double>(r_n);
  const double wd = static_cast<double>(w);
  return wd > (1.0 - delta) * r && wd < (1.0 + delta) * r;
}

std::vector<std::uint32_t> StableMemoryAllocator::unit_flip_distances(const BitVector& x) const {
  const BitVector hx = apply(x);
  std::vector<std::uint32_t> out(x.size());
  BitVector y = x;
  for (std::size_t q = 0; q < x.size(); ++q) {
    y.flip(q);
    out[q] = static_cast<std::uint32_t>(hamming_distance(hx, apply(y)));
    y.flip(q);
  }
  return out;
}

std::vector<std::vector<std::uint32_t>> StableMemoryAllocator::unit_flip_distances(
    std::span<const BitVector> xs) const {
  std::vector<std::vector<std::uint32_t>> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(unit_flip_distances(x));
  return out;
}

SelectFlipAllocator::SelectFlipAllocator(std::size_t n, std::vector<std::uint32_t> selected,
                                         std::vector<std::uint8_t> flips)
    : n_(n), selected_(std::move(selected)), flips_(std::move(flips)), mask_(n), flip_mask_(n) {
  if (selected_.size() != flips_.size()) {
    throw UsageError("select-flip needs one flip bit per selected index");
  }
  for (auto i : selected_) {
    if (i >= n_) throw UsageError("selected index out of range");
    if (mask_.test(i)) throw UsageError("selected indices must be distinct");
    mask_.set(i);
  }
  BitVectorBuilder flip_bits(n_);
  for (std::size_t j = 0; j < flips_.size(); ++j) {
    flips_[j] &= 1U;
    if (flips_[j] != 0) flip_bits.set(selected_[j]);
  }
  flip_mask_ = std::move(flip_bits).finish();
}

BitVector SelectFlipAllocator::apply(const BitVector& x) const {
  if (x.size() != n_) {
    throw UsageError("input length " + std::to_string(x.size()) + " does not match allocator length " +
                     std::to_string(n_));
  }
  BitVectorBuilder out(n_);
  const auto xs = x.words();
  const auto ms = mask_.words();
  const auto fs = flip_mask_.words();
  auto os = out.words();
  for (std::size_t w = 0; w < os.size(); ++w) os[w] = (xs[w] ^ fs[w]) & ms[w];
  return std::move(out).finish();
}

std::vector<std::uint32_t> SelectFlipAllocator::unit_flip_distances(const BitVector& x) const {
  if (x.size() != n_) throw UsageError("input length does not match allocator length");
  // Toggling x_q toggles h(x)_q exactly when q is selected.
  std::vector<std::uint32_t> out(n_);
  for (std::size_t q = 0; q < n_; ++q) out[q] = mask_.test(q) ? 1 : 0;
  return out;
}

SelectFlipAllocator sample_select_flip(std::size_t n, std::size_t r_n, const SeedPath& seed) {
  if (r_n == 0) throw UsageError("r_n must be positive");
  if (2 * r_n > n) {
    throw UsageError("select-flip requires 2 r_n <= n (got r_n = " + std::to_string(r_n) +
                     ", n = " + std::to_string(n) + ")");
  }
  const auto k = static_cast<std::uint32_t>(2 * r_n);
  Rng pick = seed.child("select").rng();
  auto selected = sample_distinct(pick, static_cast<std::uint32_t>(n), k);
  Rng coin = seed.child("flip").rng();
  std::vector<std::uint8_t> flips(k);
  std::uint64_t word = 0;
  for (std::uint32_t j = 0; j < k; ++j) {
    if (j % 64 == 0) word = coin();
    flips[j] = static_cast<std::uint8_t>((word >> (j % 64)) & 1U);
  }
  return SelectFlipAllocator(n, std::move(selected), std::move(flips));
}

BitVector apply_select_flip(const SelectFlipAllocator& h, const BitVector& x) { return h.apply(x); }

}  // namespace sma
