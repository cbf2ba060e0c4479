#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sma/bitvector.hpp"

namespace sma {

// <delta, mu, kappa, A_n, B_n, r_n> plus an optional capacity K_n.
struct SmaParams {
  double delta = 0.1;   // stability slack
  double mu = 1.0;      // Lipschitz factor for continuity
  double kappa = 0.0;   // minimum input density
  std::size_t a_n = 1;  // input gap for orthogonality
  std::size_t b_n = 1;  // required output gap
  std::size_t r_n = 1;  // target output weight
  std::optional<std::size_t> capacity;

  // Throws UsageError when the tuple cannot describe an allocator on
  // {0,1}^n (b_n > 2 r_n (1 + delta), a_n > n, ...).
  void validate(std::size_t n) const;

  // Open interval ((1 - delta) r_n, (1 + delta) r_n).
  bool stable_weight(std::size_t w) const noexcept;
};

// A sampled allocator h : {0,1}^n -> {0,1}^n.
class StableMemoryAllocator {
 public:
  virtual ~StableMemoryAllocator() = default;

  virtual std::size_t length() const noexcept = 0;
  virtual BitVector apply(const BitVector& x) const = 0;

  // d_H(h(x), h(x ^ e_q)) for every coordinate q. The default evaluates the
  // allocator n + 1 times; implementations override with incremental forms.
  virtual std::vector<std::uint32_t> unit_flip_distances(const BitVector& x) const;
  // Same for several inputs; lets implementations share set-up work.
  virtual std::vector<std::vector<std::uint32_t>> unit_flip_distances(
      std::span<const BitVector> xs) const;
};

}  // namespace sma
