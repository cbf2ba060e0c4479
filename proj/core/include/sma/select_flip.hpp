#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sma/allocator.hpp"
#include "sma/seed.hpp"

namespace sma {

// Keeps 2 r_n sampled coordinates, XORs each with its own fair coin and
// zeroes the rest: h(x)_{i_j} = b_j ^ x_{i_j}. Flips cancel in differences,
// so d_H(h(x), h(y)) <= d_H(x, y) for every sampled h.
class SelectFlipAllocator final : public StableMemoryAllocator {
 public:
  // Throws UsageError unless the indices are distinct, in range, and match
  // flips in count.
  SelectFlipAllocator(std::size_t n, std::vector<std::uint32_t> selected,
                      std::vector<std::uint8_t> flips);

  std::size_t length() const noexcept override { return n_; }
  const std::vector<std::uint32_t>& selected() const noexcept { return selected_; }
  const std::vector<std::uint8_t>& flips() const noexcept { return flips_; }

  BitVector apply(const BitVector& x) const override;
  using StableMemoryAllocator::unit_flip_distances;
  std::vector<std::uint32_t> unit_flip_distances(const BitVector& x) const override;

 private:
  std::size_t n_;
  std::vector<std::uint32_t> selected_;
  std::vector<std::uint8_t> flips_;
  BitVector mask_;       // selected coordinates
  BitVector flip_mask_;  // selected coordinates whose coin is 1
};

// Uniform 2 r_n-subset of [0, n) with independent fair flips.
SelectFlipAllocator sample_select_flip(std::size_t n, std::size_t r_n, const SeedPath& seed);

BitVector apply_select_flip(const SelectFlipAllocator& h, const BitVector& x);

}  // namespace sma
