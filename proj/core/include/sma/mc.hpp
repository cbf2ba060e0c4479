#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sma/allocator.hpp"
#include "sma/bitvector.hpp"
#include "sma/seed.hpp"
#include "sma/stats.hpp"

namespace sma::mc {

enum class AllocatorKind { select_flip, neural };

std::string to_string(AllocatorKind kind);
// Accepts "select_flip", "select-flip" and "neural"; throws UsageError otherwise.
AllocatorKind parse_allocator_kind(const std::string& text);

struct AllocatorSpec {
  AllocatorKind kind = AllocatorKind::neural;
  std::size_t n = 100000;
  double p = 2.5e-3;
  double c1 = 0.5;
  double c2 = 0.57;
  std::size_t r_n = 1500;  // select-flip keeps 2 r_n coordinates
};

// Draws one allocator from the family described by `spec`.
std::unique_ptr<StableMemoryAllocator> make_allocator(const AllocatorSpec& spec,
                                                      const SeedPath& seed);

struct ExperimentConfig {
  AllocatorSpec allocator;
  std::size_t trials = 10;
  std::uint64_t master_seed = 0;
  std::vector<double> density_grid;
  std::vector<std::size_t> distance_grid;
  unsigned threads = 1;
  // When false every trial reuses allocator 0, so the spread reflects the
  // inputs only.
  bool fresh_allocator = true;
  double kappa = 0.0;

  // Throws UsageError on empty grids, zero trials, densities outside [0, 1]
  // or below kappa, and distances outside [1, n].
  void validate() const;
};

// Seeds used by the harness. Trial t draws allocator t (or 0 in fixed mode);
// inputs are keyed by grid index and trial.
SeedPath allocator_seed(const ExperimentConfig& cfg, std::size_t trial);

struct StabilityRow {
  double input_density = 0.0;
  StatSummary layer2;
  StatSummary output;
};

// Densities of the middle and output layers of a neural allocator across
// input densities. Within one trial all densities share the sampled
// network, which is evaluated once for the whole batch.
std::vector<StabilityRow> stability_curve(const ExperimentConfig& cfg);

struct ExpansionRow {
  double input_density = 0.0;
  std::size_t distance = 0;
  StatSummary expansion;  // d_H(h(x), h(y)) / d_H(x, y)
};

// Expansion rate across input distances. For each trial and density one
// base input x is drawn and paired with a y at every distance on the grid;
// rows are sorted by (density, L).
std::vector<ExpansionRow> expansion_curve(const ExperimentConfig& cfg);

// Per-pair failure frequencies of the three allocator events over fresh
// allocator draws: stability fails when either image weight leaves the open
// interval, continuity when d_H(h(x), h(y)) > mu d_H(x, y), orthogonality
// when d_H(h(x), h(y)) <= B_n. Orthogonality is only defined for
// d_H(x, y) > A_n and is empty otherwise.
struct PairwiseError {
  StatSummary stability;
  StatSummary continuity;
  std::optional<StatSummary> orthogonality;
};

PairwiseError pairwise_error_estimate(const ExperimentConfig& cfg, const SmaParams& params,
                                      const BitVector& x, const BitVector& y);

// Distances used for the sampled continuity check beyond the n unit flips.
inline constexpr std::size_t kProbeDistances[] = {3, 10, 30, 100};

struct CapacityProbe {
  StatSummary failure;            // any stability, continuity or orthogonality violation on the set
  StatSummary stability_failure;  // some item has an unstable image
  StatSummary continuity_failure; // some sampled neighbour is too far
  StatSummary orthogonality_failure;
  std::size_t set_size = 0;
};

// Per trial: draws K inputs pairwise more than A_n apart (densities cycle
// through the grid, rejection on distance), samples one allocator and checks
// stability of every image, continuity against every unit flip plus one
// random neighbour at each distance in kProbeDistances, and orthogonality for
// every pair. Continuity over the whole cube is not testable; this sampled
// neighbourhood stands in for it. Throws UsageError when a K-set cannot be
// built within the draw budget.
CapacityProbe capacity_probe(const ExperimentConfig& cfg, const SmaParams& params, std::size_t k);

// Per-item and per-pair event frequencies on items drawn like those in
// capacity_probe. eps_hat is the largest of the three, the per-pair error
// rate that the union bound K^2 eps + 2K eps consumes.
struct EventRates {
  StatSummary item_stability;
  StatSummary item_continuity;  // sampled neighbourhood, as in capacity_probe
  StatSummary pair_orthogonality;
  double eps_hat = 0.0;
  double eps_hat_se = 0.0;
};

EventRates event_rates(const ExperimentConfig& cfg, const SmaParams& params);

// Draws `count` items of length n, pairwise more than `min_distance` apart,
// with densities cycling through `densities`.
std::vector<BitVector> draw_separated_items(std::size_t n, std::size_t count,
                                            const std::vector<double>& densities,
                                            std::size_t min_distance, const SeedPath& seed,
                                            std::size_t draws_per_item = 1000);

struct LemmaParams {
  std::size_t m = 400;      // lemmas 1, 2: |x|
  double p = 0.01;          // sign probability
  std::size_t wx = 1000;    // lemma 3
  std::size_t wy = 1000;
  std::size_t wxy = 900;
  std::size_t n = 10000;    // lemma 4
  double c = 0.5;
  double eta = 0.1;
};

struct LemmaCheck {
  int lemma = 0;
  std::string event;
  StatSummary empirical;
  double exact = 0.0;     // exact probability where one is known, NaN otherwise
  double analytic = 0.0;  // the lemma's bound or approximation
  double abs_gap = 0.0;   // |empirical.mean - analytic|
};

// Simulates the lemma's probabilistic setup directly.
//   1: event beta^T x = 0; exact from the DP, analytic = twice the closed-form
//      bound (Pr{beta^T x = 0} = 1 - 2 Pr{beta^T x > 0}).
//   2: event g(x) != g(x + e_q) for a fresh coordinate q; exact
//      p (Pr{0} + Pr{1}), analytic = the closed-form bound.
//   3: event g(x) != g(y) for the given weights and overlap; analytic
//      arccos value.
//   4: event g(x) != g(y) for n i.i.d. pairs with disagreement eta and
//      weights in {1 - c, -c, 0}; analytic = quadrature value.
// Sums of sparse sign weights are drawn through their exact compound
// binomial law, so cost per trial does not grow with m.
LemmaCheck lemma_check(int lemma, const LemmaParams& params, std::size_t trials,
                       const SeedPath& seed, unsigned threads = 1);

}  // namespace sma::mc
