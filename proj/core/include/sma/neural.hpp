#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sma/allocator.hpp"
#include "sma/seed.hpp"

namespace sma {

// Parameters derived for the three-layer network from a target output
// weight r_n:
//   s   = Phi^{-1}(r_n / n) * sqrt(2 / (n p))
//   c2  = 1/2 - s / (2 sqrt(2 - s^2))
//   mu_n = z0 * r_n * s0^{-1/4} * n^{-(1+gamma)/4} * (log n)^2
struct NetworkParams {
  double s = 0.0;
  double c2 = 0.5;
  double mu_n = 0.0;
  double z0 = 1.0;
};

// log_base selects the logarithm in mu_n (natural by default).
NetworkParams compute_network_params(std::size_t n, double p, std::size_t r_n, double s0,
                                     double gamma, double z0 = 1.0, double log_base = 0.0);

// Divisive-inhibition firing rule: fire iff P > c (P + N), i.e.
// (1 - c) P - c N > 0 with ties and zero drive not firing. Evaluated with a
// single fma so the sign is exact.
inline bool divisive_fires(std::uint32_t positive, std::uint32_t negative, double c) noexcept {
  const double total = static_cast<double>(positive) + static_cast<double>(negative);
  return __builtin_fma(c, total, -static_cast<double>(positive)) < 0.0;
}

// Three layers of n neurons; each directed edge between consecutive layers
// exists with probability 2p and is excitatory or inhibitory with
// probability p each. Connectivity is never stored: row j of a layer is
// regenerated from (layer seed, j) whenever it is needed, so any query of the
// same synapse returns the same answer and rows can be evaluated in any order.
class NeuralAllocator final : public StableMemoryAllocator {
 public:
  struct Synapse {
    std::uint32_t source;
    std::int8_t sign;  // +1 excitatory, -1 inhibitory
  };

  struct Trace {
    BitVector middle;
    BitVector output;
  };

  NeuralAllocator(std::size_t n, double p, double c1, double c2, const SeedPath& seed,
                  std::optional<double> gamma = std::nullopt);

  std::size_t length() const noexcept override { return n_; }
  double p() const noexcept { return p_; }
  double c1() const noexcept { return c1_; }
  double c2() const noexcept { return c2_; }
  std::optional<double> gamma() const noexcept { return gamma_; }

  // Incoming synapses of neuron `target` in layer 2 (layer == 1) or layer 3
  // (layer == 2).
  std::vector<Synapse> row_synapses(int layer, std::size_t target) const;
  // +1, -1 or 0 (no edge).
  int synapse(int layer, std::size_t source, std::size_t target) const;

  BitVector layer_forward(int layer, const BitVector& x, double c, unsigned threads = 1) const;
  // Evaluates several inputs against one regeneration of each row.
  std::vector<BitVector> layer_forward(int layer, std::span<const BitVector> xs, double c,
                                       unsigned threads = 1) const;

  Trace trace(const BitVector& x, unsigned threads = 1) const;
  std::vector<Trace> trace(std::span<const BitVector> xs, unsigned threads = 1) const;

  BitVector apply(const BitVector& x) const override;
  BitVector apply(const BitVector& x, unsigned threads) const;

  // Materializes both layers (sparse rows plus column index) and propagates
  // each single-bit change incrementally. Falls back to the generic sweep
  // when the network is too large to hold in memory.
  std::vector<std::uint32_t> unit_flip_distances(const BitVector& x) const override;
  std::vector<std::vector<std::uint32_t>> unit_flip_distances(
      std::span<const BitVector> xs) const override;

 private:
  template <class Visit>
  void generate_row(int layer, std::size_t target, std::vector<std::uint32_t>& sources,
                    SampleScratch& scratch, Visit&& visit) const;

  std::size_t n_;
  double p_;
  double c1_;
  double c2_;
  std::optional<double> gamma_;
  std::uint64_t layer_key_[2];
};

NeuralAllocator sample_neural(std::size_t n, double p, double c1, double c2,
                              const SeedPath& seed);

BitVector layer_forward(const NeuralAllocator& h, int layer, const BitVector& x, double c);
BitVector apply_neural(const NeuralAllocator& h, const BitVector& x, unsigned threads = 1);

}  // namespace sma
