#include "sma/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sma/bounds.hpp"
#include "sma/errors.hpp"
#include "sma/neural.hpp"
#include "sma/parallel.hpp"
#include "sma/random.hpp"
#include "sma/select_flip.hpp"

namespace sma::mc {

namespace {

// Images of several inputs under one allocator; the neural network is
// regenerated once for the whole batch.
std::vector<BitVector> apply_all(const StableMemoryAllocator& h, std::span<const BitVector> xs) {
  if (const auto* net = dynamic_cast<const NeuralAllocator*>(&h)) {
    auto traces = net->trace(xs);
    std::vector<BitVector> out;
    out.reserve(traces.size());
    for (auto& t : traces) out.push_back(std::move(t.output));
    return out;
  }
  std::vector<BitVector> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(h.apply(x));
  return out;
}

BitVector perturb(const BitVector& x, std::size_t distance, const SeedPath& seed) {
  Rng rng = seed.rng();
  BitVector y = x;
  for (auto i : sample_distinct(rng, static_cast<std::uint32_t>(x.size()),
                                static_cast<std::uint32_t>(distance))) {
    y.flip(i);
  }
  return y;
}

double indicator(bool event) { return event ? 1.0 : 0.0; }

// Fails when some unit flip or sampled neighbour of x lands more than
// mu * distance away after the allocator.
bool continuity_fails(const StableMemoryAllocator& h, const BitVector& x, const BitVector& hx,
                      const std::vector<std::uint32_t>& unit_flips, double mu, const SeedPath& seed) {
  for (auto d : unit_flips) {
    if (static_cast<double>(d) > mu) return true;
  }
  std::vector<BitVector> neighbours;
  std::vector<std::size_t> distances;
  for (std::size_t i = 0; i < std::size(kProbeDistances); ++i) {
    if (kProbeDistances[i] > x.size()) continue;
    neighbours.push_back(perturb(x, kProbeDistances[i], seed.child("neighbour", i)));
    distances.push_back(kProbeDistances[i]);
  }
  const auto images = apply_all(h, neighbours);
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (static_cast<double>(hamming_distance(hx, images[i])) > mu * static_cast<double>(distances[i])) {
      return true;
    }
  }
  return false;
}

std::vector<StatSummary> summarize_columns(const std::vector<std::vector<double>>& columns) {
  std::vector<StatSummary> out;
  out.reserve(columns.size());
  for (const auto& c : columns) out.push_back(summarize(c));
  return out;
}

}  // namespace

std::string to_string(AllocatorKind kind) {
  return kind == AllocatorKind::neural ? "neural" : "select_flip";
}

AllocatorKind parse_allocator_kind(const std::string& text) {
  if (text == "neural") return AllocatorKind::neural;
  if (text == "select_flip" || text == "select-flip") return AllocatorKind::select_flip;
  throw UsageError("unknown allocator kind '" + text + "' (expected neural or select_flip)");
}

std::unique_ptr<StableMemoryAllocator> make_allocator(const AllocatorSpec& spec,
                                                      const SeedPath& seed) {
  if (spec.kind == AllocatorKind::neural) {
    return std::make_unique<NeuralAllocator>(spec.n, spec.p, spec.c1, spec.c2, seed);
  }
  return std::make_unique<SelectFlipAllocator>(sample_select_flip(spec.n, spec.r_n, seed));
}

void ExperimentConfig::validate() const {
  if (allocator.n == 0) throw UsageError("n must be positive");
  if (trials == 0) throw UsageError("trials must be at least 1");
  if (density_grid.empty()) throw UsageError("density grid must not be empty");
  for (double d : density_grid) {
    if (!(d >= 0.0 && d <= 1.0)) throw UsageError("densities must lie in [0, 1]");
    if (d < kappa) throw UsageError("density " + std::to_string(d) + " is below kappa");
  }
  for (auto L : distance_grid) {
    if (L == 0 || L > allocator.n) throw UsageError("distances must lie in [1, n]");
  }
}

SeedPath allocator_seed(const ExperimentConfig& cfg, std::size_t trial) {
  return SeedPath(cfg.master_seed).child("allocator", cfg.fresh_allocator ? trial : 0);
}

std::vector<StabilityRow> stability_curve(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.allocator.kind != AllocatorKind::neural) {
    throw UsageError("stability curve requires the neural allocator");
  }
  const std::size_t n = cfg.allocator.n;
  const std::size_t grid = cfg.density_grid.size();
  const SeedPath root(cfg.master_seed);
  const double scale = 1.0 / static_cast<double>(n);
  std::vector<std::vector<double>> middle(grid, std::vector<double>(cfg.trials));
  std::vector<std::vector<double>> output(grid, std::vector<double>(cfg.trials));

  parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
    const NeuralAllocator h(n, cfg.allocator.p, cfg.allocator.c1, cfg.allocator.c2,
                            allocator_seed(cfg, t));
    std::vector<BitVector> xs;
    xs.reserve(grid);
    for (std::size_t d = 0; d < grid; ++d) {
      xs.push_back(random_bitvector(n, cfg.density_grid[d], root.child("input", d).child("trial", t)));
    }
    const auto traces = h.trace(xs);
    for (std::size_t d = 0; d < grid; ++d) {
      middle[d][t] = static_cast<double>(traces[d].middle.weight()) * scale;
      output[d][t] = static_cast<double>(traces[d].output.weight()) * scale;
    }
  });

  std::vector<StabilityRow> rows;
  rows.reserve(grid);
  for (std::size_t d = 0; d < grid; ++d) {
    rows.push_back({cfg.density_grid[d], summarize(middle[d]), summarize(output[d])});
  }
  return rows;
}

std::vector<ExpansionRow> expansion_curve(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.distance_grid.empty()) throw UsageError("distance grid must not be empty");
  const std::size_t n = cfg.allocator.n;
  const std::size_t grid = cfg.density_grid.size();
  const std::size_t dists = cfg.distance_grid.size();
  const SeedPath root(cfg.master_seed);
  std::vector<std::vector<double>> rate(grid * dists, std::vector<double>(cfg.trials));

  parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
    const auto h = make_allocator(cfg.allocator, allocator_seed(cfg, t));
    // Layout per density: x, then y for each distance.
    std::vector<BitVector> batch;
    batch.reserve(grid * (dists + 1));
    for (std::size_t d = 0; d < grid; ++d) {
      const SeedPath pair_seed = root.child("pair", d).child("trial", t);
      for (std::size_t l = 0; l < dists; ++l) {
        auto [x, y] = random_pair_at_distance(n, cfg.density_grid[d], cfg.distance_grid[l], pair_seed);
        if (l == 0) batch.push_back(std::move(x));
        batch.push_back(std::move(y));
      }
    }
    const auto images = apply_all(*h, batch);
    for (std::size_t d = 0; d < grid; ++d) {
      const auto& hx = images[d * (dists + 1)];
      for (std::size_t l = 0; l < dists; ++l) {
        const auto& hy = images[d * (dists + 1) + 1 + l];
        rate[d * dists + l][t] = static_cast<double>(hamming_distance(hx, hy)) /
                                 static_cast<double>(cfg.distance_grid[l]);
      }
    }
  });

  std::vector<ExpansionRow> rows;
  rows.reserve(grid * dists);
  for (std::size_t d = 0; d < grid; ++d) {
    for (std::size_t l = 0; l < dists; ++l) {
      rows.push_back({cfg.density_grid[d], cfg.distance_grid[l], summarize(rate[d * dists + l])});
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const ExpansionRow& a, const ExpansionRow& b) {
    if (a.input_density != b.input_density) return a.input_density < b.input_density;
    return a.distance < b.distance;
  });
  return rows;
}

PairwiseError pairwise_error_estimate(const ExperimentConfig& cfg, const SmaParams& params,
                                      const BitVector& x, const BitVector& y) {
  const std::size_t n = cfg.allocator.n;
  if (x.size() != n || y.size() != n) throw UsageError("inputs must have length n");
  if (cfg.trials == 0) throw UsageError("trials must be at least 1");
  params.validate(n);
  const double floor_weight = params.kappa * static_cast<double>(n);
  if (static_cast<double>(x.weight()) < floor_weight || static_cast<double>(y.weight()) < floor_weight) {
    throw UsageError("inputs must have weight at least kappa n");
  }
  const std::size_t dxy = hamming_distance(x, y);
  const bool orthogonal_pair = dxy > params.a_n;

  std::vector<std::vector<double>> ev(3, std::vector<double>(cfg.trials));
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
    const auto h = make_allocator(cfg.allocator, allocator_seed(cfg, t));
    const BitVector inputs[] = {x, y};
    const auto images = apply_all(*h, inputs);
    const std::size_t dh = hamming_distance(images[0], images[1]);
    ev[0][t] = indicator(!params.stable_weight(images[0].weight()) ||
                         !params.stable_weight(images[1].weight()));
    ev[1][t] = indicator(static_cast<double>(dh) > params.mu * static_cast<double>(dxy));
    ev[2][t] = indicator(dh <= params.b_n);
  });

  PairwiseError out;
  out.stability = summarize(ev[0]);
  out.continuity = summarize(ev[1]);
  if (orthogonal_pair) out.orthogonality = summarize(ev[2]);
  return out;
}

std::vector<BitVector> draw_separated_items(std::size_t n, std::size_t count,
                                            const std::vector<double>& densities,
                                            std::size_t min_distance, const SeedPath& seed,
                                            std::size_t draws_per_item) {
  if (densities.empty()) throw UsageError("density grid must not be empty");
  std::vector<BitVector> items;
  items.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double density = densities[i % densities.size()];
    bool placed = false;
    for (std::size_t draw = 0; draw < draws_per_item && !placed; ++draw) {
      auto candidate = random_bitvector(n, density, seed.child("item", i).child("draw", draw));
      placed = std::all_of(items.begin(), items.end(), [&](const BitVector& other) {
        return hamming_distance(candidate, other) > min_distance;
      });
      if (placed) items.push_back(std::move(candidate));
    }
    if (!placed) {
      throw UsageError("could not place item " + std::to_string(i) + " more than " +
                       std::to_string(min_distance) + " away from the others within " +
                       std::to_string(draws_per_item) + " draws");
    }
  }
  return items;
}

CapacityProbe capacity_probe(const ExperimentConfig& cfg, const SmaParams& params, std::size_t k) {
  cfg.validate();
  if (k < 2) throw UsageError("capacity probe requires K >= 2");
  const std::size_t n = cfg.allocator.n;
  params.validate(n);
  const SeedPath root(cfg.master_seed);
  std::vector<std::vector<double>> ev(4, std::vector<double>(cfg.trials));

  parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
    const SeedPath trial = root.child("probe", t);
    const auto items = draw_separated_items(n, k, cfg.density_grid, params.a_n, trial.child("items"));
    const auto h = make_allocator(cfg.allocator, allocator_seed(cfg, t));
    const auto images = apply_all(*h, items);
    const auto unit_flips = h->unit_flip_distances(items);
    bool unstable = false, discontinuous = false, collapsed = false;
    for (std::size_t i = 0; i < k; ++i) {
      unstable = unstable || !params.stable_weight(images[i].weight());
      discontinuous = discontinuous || continuity_fails(*h, items[i], images[i], unit_flips[i],
                                                        params.mu, trial.child("item", i));
      for (std::size_t j = i + 1; j < k && !collapsed; ++j) {
        collapsed = hamming_distance(images[i], images[j]) <= params.b_n;
      }
    }
    ev[0][t] = indicator(unstable || discontinuous || collapsed);
    ev[1][t] = indicator(unstable);
    ev[2][t] = indicator(discontinuous);
    ev[3][t] = indicator(collapsed);
  });

  const auto s = summarize_columns(ev);
  return {s[0], s[1], s[2], s[3], k};
}

EventRates event_rates(const ExperimentConfig& cfg, const SmaParams& params) {
  cfg.validate();
  const std::size_t n = cfg.allocator.n;
  params.validate(n);
  const SeedPath root = SeedPath(cfg.master_seed).child("rates");
  std::vector<std::vector<double>> ev(3, std::vector<double>(cfg.trials));

  parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
    const SeedPath trial = root.child("trial", t);
    const auto items = draw_separated_items(n, 2, cfg.density_grid, params.a_n, trial.child("items"));
    const auto h = make_allocator(cfg.allocator, root.child("allocator", t));
    const auto images = apply_all(*h, items);
    ev[0][t] = indicator(!params.stable_weight(images[0].weight()));
    ev[1][t] = indicator(continuity_fails(*h, items[0], images[0], h->unit_flip_distances(items[0]),
                                          params.mu, trial.child("item", 0)));
    ev[2][t] = indicator(hamming_distance(images[0], images[1]) <= params.b_n);
  });

  const auto s = summarize_columns(ev);
  EventRates out{s[0], s[1], s[2], 0.0, 0.0};
  for (const auto& e : s) {
    if (e.mean >= out.eps_hat) {
      out.eps_hat = e.mean;
      out.eps_hat_se = std::max(out.eps_hat_se, e.std_error);
    }
  }
  return out;
}

namespace {

// Sum of `count` i.i.d. weights that are +1 or -1 with probability p each and
// 0 otherwise.
std::int64_t trinomial_sum(Rng& rng, std::uint64_t count, double p) {
  const auto nonzero = binomial(rng, count, 2.0 * p);
  const auto positive = binomial(rng, nonzero, 0.5);
  return 2 * static_cast<std::int64_t>(positive) - static_cast<std::int64_t>(nonzero);
}

double lemma_trial(int lemma, const LemmaParams& q, Rng& rng) {
  switch (lemma) {
    case 1:
      return indicator(trinomial_sum(rng, q.m, q.p) == 0);
    case 2: {
      const auto s = trinomial_sum(rng, q.m, q.p);
      const std::int64_t extra = trinomial_sum(rng, 1, q.p);
      return indicator((s > 0) != (s + extra > 0));
    }
    case 3: {
      const auto shared = trinomial_sum(rng, q.wxy, q.p);
      const auto sx = shared + trinomial_sum(rng, q.wx - q.wxy, q.p);
      const auto sy = shared + trinomial_sum(rng, q.wy - q.wxy, q.p);
      return indicator((sx > 0) != (sy > 0));
    }
    default: {
      // Nonzero weights split by sign, then by pair type 11, 10, 01, 00 with
      // probabilities (1 - eta)/2, eta/2, eta/2, (1 - eta)/2.
      const auto nonzero = binomial(rng, q.n, 2.0 * q.p);
      std::uint64_t counts[2][3];  // [sign][11, 10, 01]
      std::uint64_t remaining[2];
      remaining[0] = binomial(rng, nonzero, 0.5);
      remaining[1] = nonzero - remaining[0];
      const double probs[3] = {(1.0 - q.eta) / 2.0, q.eta / 2.0, q.eta / 2.0};
      for (int s = 0; s < 2; ++s) {
        double left = 1.0;
        for (int type = 0; type < 3; ++type) {
          const double share = left > 0.0 ? std::min(1.0, probs[type] / left) : 0.0;
          counts[s][type] = binomial(rng, remaining[s], share);
          remaining[s] -= counts[s][type];
          left -= probs[type];
        }
      }
      const auto px = static_cast<std::uint32_t>(counts[0][0] + counts[0][1]);
      const auto nx = static_cast<std::uint32_t>(counts[1][0] + counts[1][1]);
      const auto py = static_cast<std::uint32_t>(counts[0][0] + counts[0][2]);
      const auto ny = static_cast<std::uint32_t>(counts[1][0] + counts[1][2]);
      return indicator(divisive_fires(px, nx, q.c) != divisive_fires(py, ny, q.c));
    }
  }
}

}  // namespace

LemmaCheck lemma_check(int lemma, const LemmaParams& params, std::size_t trials,
                       const SeedPath& seed, unsigned threads) {
  if (lemma < 1 || lemma > 4) throw UsageError("lemma must be 1, 2, 3 or 4");
  if (trials == 0) throw UsageError("trials must be at least 1");
  if (!(params.p > 0.0 && 2.0 * params.p <= 1.0)) throw UsageError("requires 0 < 2p <= 1");

  LemmaCheck out;
  out.lemma = lemma;
  out.exact = std::numeric_limits<double>::quiet_NaN();
  switch (lemma) {
    case 1: {
      out.event = "beta^T x = 0";
      out.exact = bounds::lemma1_exact(params.m, params.p).p_zero;
      out.analytic = 2.0 * bounds::lemma12_bounds(params.m, params.p).stability_gap_bound;
      break;
    }
    case 2: {
      out.event = "g(x) != g(x + e_q)";
      out.exact = bounds::onebit_flip_exact(params.m, params.p);
      out.analytic = bounds::lemma12_bounds(params.m, params.p).onebit_flip_bound;
      break;
    }
    case 3: {
      out.event = "g(x) != g(y)";
      out.analytic = bounds::lemma3_flip_prob(params.wx, params.wy, params.wxy).value;
      break;
    }
    default: {
      if (!(params.c > 0.0 && params.c < 1.0)) throw UsageError("requires 0 < c < 1");
      out.event = "g(x) != g(y), pair model";
      out.analytic = bounds::lemma4_flip_prob(static_cast<double>(params.n), params.c, params.p,
                                              params.eta);
      break;
    }
  }

  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (trials + kChunk - 1) / kChunk;
  std::vector<double> samples(trials);
  const std::uint64_t label = SeedPath::hash_label("chunk");
  parallel_for(chunks, threads, [&](std::size_t c) {
    Rng rng(SeedPath::derive(seed.key(), label, c));
    const std::size_t end = std::min(trials, (c + 1) * kChunk);
    for (std::size_t t = c * kChunk; t < end; ++t) samples[t] = lemma_trial(lemma, params, rng);
  });
  out.empirical = summarize(samples);
  out.abs_gap = std::abs(out.empirical.mean - out.analytic);
  return out;
}

}  // namespace sma::mc
