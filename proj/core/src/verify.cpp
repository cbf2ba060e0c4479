#include "sma/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "sma/bitvector.hpp"
#include "sma/bounds.hpp"
#include "sma/datadep.hpp"
#include "sma/errors.hpp"
#include "sma/mc.hpp"
#include "sma/neural.hpp"
#include "sma/parallel.hpp"
#include "sma/select_flip.hpp"

namespace sma::verify {

namespace {

std::size_t trials_or(const VerifyOptions& opts, std::size_t fallback) {
  return opts.trials.value_or(fallback);
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

// Empirical frequency against a known probability; the tolerance is three
// binomial standard errors at that probability.
CheckRow frequency_row(std::string name, const StatSummary& empirical, double exact) {
  CheckRow row;
  row.name = std::move(name);
  row.empirical = empirical.mean;
  row.analytic = exact;
  row.tolerance = 3.0 * std::sqrt(exact * (1.0 - exact) / static_cast<double>(empirical.count));
  row.pass = std::abs(empirical.mean - exact) <= row.tolerance;
  return row;
}

// Empirical frequency that must not exceed an upper bound beyond Monte Carlo
// error.
CheckRow upper_bound_row(std::string name, const StatSummary& empirical, double bound) {
  CheckRow row;
  row.name = std::move(name);
  row.empirical = empirical.mean;
  row.analytic = bound;
  row.tolerance = 3.0 * empirical.std_error;
  row.pass = empirical.mean <= bound + row.tolerance;
  return row;
}

CheckRow band_row(std::string name, double value, double low, double high) {
  CheckRow row;
  row.name = std::move(name);
  row.empirical = value;
  row.analytic = 0.5 * (low + high);
  row.tolerance = 0.5 * (high - low);
  row.pass = value > low && value < high;
  row.note = "open band (" + fmt(low) + ", " + fmt(high) + ")";
  return row;
}

mc::ExperimentConfig reference_config(const VerifyOptions& opts) {
  mc::ExperimentConfig cfg;
  cfg.allocator = {mc::AllocatorKind::neural, 100000, 2.5e-3, 0.5, 0.57, 1500};
  cfg.trials = trials_or(opts, 10);
  cfg.master_seed = opts.seed;
  cfg.threads = opts.threads;
  for (int k = 1; k <= 10; ++k) cfg.density_grid.push_back(k / 20.0);
  cfg.distance_grid = {1, 3, 10, 30, 100};
  return cfg;
}

std::vector<CheckRow> layer_density_rows(const VerifyOptions& opts) {
  std::vector<CheckRow> rows;
  for (const auto& r : mc::stability_curve(reference_config(opts))) {
    rows.push_back(band_row("fig1a layer2 density @ s=" + fmt(r.input_density), r.layer2.mean, 0.45, 0.50));
    rows.push_back(band_row("fig1a output density @ s=" + fmt(r.input_density), r.output.mean, 0.012, 0.019));
  }
  return rows;
}

std::vector<CheckRow> expansion_rows(const VerifyOptions& opts) {
  const auto cfg = reference_config(opts);
  const auto table = mc::expansion_curve(cfg);
  std::vector<CheckRow> rows;
  for (double density : cfg.density_grid) {
    double first = 0.0, last = 0.0;
    bool positive = true;
    for (const auto& r : table) {
      if (r.input_density != density) continue;
      positive = positive && r.expansion.mean > 0.0;
      if (r.distance == 1) first = r.expansion.mean;
      if (r.distance == 100) last = r.expansion.mean;
    }
    CheckRow row;
    row.name = "fig1b rate(L=100) < rate(L=1) @ s=" + fmt(density);
    row.empirical = last;
    row.analytic = first;
    row.pass = positive && last < first;
    row.note = positive ? "all rates positive" : "some rate is zero";
    rows.push_back(row);
  }
  return rows;
}

std::vector<CheckRow> c2_crosscheck(const VerifyOptions&) {
  const auto params = compute_network_params(100000, 2.5e-3, 1500, 0.05, 0.92);
  auto row = band_row("C2 from r_n/n = 0.015", params.c2, 0.565, 0.575);
  row.analytic = 0.57;
  row.note = "closed band [0.565, 0.575]; simulation value 0.57";
  row.pass = params.c2 >= 0.565 && params.c2 <= 0.575;
  return {row};
}

std::vector<CheckRow> lemma1_grid(const VerifyOptions& opts) {
  std::vector<CheckRow> rows;
  const std::size_t trials = trials_or(opts, 100000);
  std::uint64_t index = 0;
  for (std::size_t m : {10u, 100u, 1000u, 10000u}) {
    for (double p : {1e-3, 1e-2, 1e-1}) {
      if (p * static_cast<double>(m) < 1.0) continue;
      mc::LemmaParams q;
      q.m = m;
      q.p = p;
      const auto check =
          mc::lemma_check(1, q, trials, SeedPath(opts.seed).child("lemma1", index++), opts.threads);
      auto row = frequency_row("lemma1 Pr{beta^T x = 0} m=" + std::to_string(m) + " p=" + fmt(p),
                               check.empirical, check.exact);
      const bool under_bound = check.exact <= check.analytic;
      row.note = "exact DP; 2x bound = " + fmt(check.analytic) + (under_bound ? "" : " VIOLATED");
      row.pass = row.pass && under_bound;
      rows.push_back(row);
    }
  }
  return rows;
}

CheckRow lemma2_row(const VerifyOptions& opts) {
  mc::LemmaParams q;
  q.m = 400;
  q.p = 0.01;
  const auto check = mc::lemma_check(2, q, trials_or(opts, 100000),
                                     SeedPath(opts.seed).child("lemma2"), opts.threads);
  auto row = frequency_row("lemma2 one-bit flip m=400 p=0.01", check.empirical, check.exact);
  const bool under_bound = check.exact <= check.analytic;
  row.note = "exact p(P0 + P1); bound = " + fmt(check.analytic) + (under_bound ? "" : " VIOLATED");
  row.pass = row.pass && under_bound;
  return row;
}

std::vector<CheckRow> lemma3_grid(const VerifyOptions& opts) {
  std::vector<CheckRow> rows;
  std::uint64_t index = 0;
  for (std::size_t overlap : {0u, 500u, 900u, 1000u}) {
    mc::LemmaParams q;
    q.wx = q.wy = 1000;
    q.wxy = overlap;
    q.p = 0.05;
    const auto check = mc::lemma_check(3, q, trials_or(opts, 100000),
                                       SeedPath(opts.seed).child("lemma3", index++), opts.threads);
    CheckRow row;
    row.name = "lemma3 sign flip overlap=" + std::to_string(overlap);
    row.empirical = check.empirical.mean;
    row.analytic = check.analytic;
    row.tolerance = 0.01;
    row.pass = check.abs_gap <= row.tolerance;
    row.note = "wx = wy = 1000, p = 0.05";
    rows.push_back(row);
  }
  return rows;
}

std::vector<CheckRow> lemma4_grid(const VerifyOptions& opts) {
  std::vector<CheckRow> rows;
  std::uint64_t index = 0;
  for (double c : {0.5, 0.57}) {
    for (double eta : {0.05, 0.1, 0.3}) {
      mc::LemmaParams q;
      q.n = 10000;
      q.p = 0.025;
      q.c = c;
      q.eta = eta;
      const auto check = mc::lemma_check(4, q, trials_or(opts, 100000),
                                         SeedPath(opts.seed).child("lemma4", index++), opts.threads);
      CheckRow row;
      row.name = "lemma4 pair model c=" + fmt(c) + " eta=" + fmt(eta);
      row.empirical = check.empirical.mean;
      row.analytic = check.analytic;
      row.tolerance = 0.02;
      row.pass = check.abs_gap <= row.tolerance;
      row.note = "n = 10^4, p = 0.025 (np = 250)";
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<CheckRow> select_flip_properties(const VerifyOptions& opts) {
  constexpr std::size_t n = 10000, r_n = 500, d = 1000;
  constexpr double delta = 0.1;
  const SeedPath root = SeedPath(opts.seed).child("selectflip");
  std::vector<CheckRow> rows;

  // Continuity: random (h, x, y) with 1 <= d_H(x, y) <= 100.
  {
    const std::size_t triples = trials_or(opts, 1000000);
    constexpr std::size_t kChunk = 8192;
    const std::size_t chunks = (triples + kChunk - 1) / kChunk;
    std::vector<double> failures(chunks, 0.0);
    parallel_for(chunks, opts.threads, [&](std::size_t c) {
      const SeedPath chunk = root.child("continuity", c);
      Rng rng = chunk.rng();
      SampleScratch scratch(n);
      std::vector<std::uint32_t> toggles;
      const std::size_t end = std::min(triples, (c + 1) * kChunk);
      for (std::size_t t = c * kChunk; t < end; ++t) {
        toggles.clear();
        sample_distinct(rng, n, 2 * r_n, toggles, scratch);
        std::vector<std::uint8_t> flips(toggles.size());
        for (auto& f : flips) f = static_cast<std::uint8_t>(rng() & 1);
        const SelectFlipAllocator h(n, toggles, std::move(flips));
        BitVectorBuilder xb(n);
        for (auto& w : xb.words()) w = rng();
        const BitVector x = std::move(xb).finish();
        BitVector y = x;
        toggles.clear();
        sample_distinct(rng, n, 1 + uniform_below(rng, 100), toggles, scratch);
        for (auto i : toggles) y.flip(i);
        if (hamming_distance(h.apply(x), h.apply(y)) > hamming_distance(x, y)) failures[c] += 1.0;
      }
    });
    CheckRow row;
    row.name = "selectflip continuity failures (mu = 1)";
    row.empirical = pairwise_sum(failures);
    row.analytic = 0.0;
    row.pass = row.empirical == 0.0;
    row.note = std::to_string(triples) + " random (h, x, y) triples, failure count";
    rows.push_back(row);
  }

  const std::size_t trials = trials_or(opts, 100000);
  // Stability: |h(x)| ~ Binomial(2 r_n, 1/2) outside the open delta band.
  {
    SmaParams params;
    params.delta = delta;
    params.r_n = r_n;
    const auto x = random_bitvector(n, 0.5, root.child("stability-input"));
    std::vector<double> fails(trials);
    parallel_for(trials, opts.threads, [&](std::size_t t) {
      const auto h = sample_select_flip(n, r_n, root.child("stability", t));
      fails[t] = params.stable_weight(h.apply(x).weight()) ? 0.0 : 1.0;
    });
    const double chernoff = 2.0 * std::exp(-2.0 * std::pow(delta * r_n, 2) / (2.0 * r_n));
    auto row = upper_bound_row("selectflip stability failure (delta = 0.1)", summarize(fails), chernoff);
    row.note = "Chernoff 2 exp(-2 (delta r_n)^2 / (2 r_n))";
    rows.push_back(row);
  }
  // Orthogonality at d_H(x, y) = 1000: d_H(h(x), h(y)) <= (1 - delta) 2 r_n d / n.
  {
    const double cutoff = (1.0 - delta) * 2.0 * r_n * d / n;
    std::vector<double> fails(trials);
    parallel_for(trials, opts.threads, [&](std::size_t t) {
      const auto h = sample_select_flip(n, r_n, root.child("orthogonality", t));
      const auto [x, y] = random_pair_at_distance(n, 0.5, d, root.child("orthogonality-pair", t));
      fails[t] = static_cast<double>(hamming_distance(h.apply(x), h.apply(y))) <= cutoff ? 1.0 : 0.0;
    });
    const double tail = std::exp(-4.0 * r_n * std::pow(static_cast<double>(d) / n, 2) * delta * delta);
    auto row = upper_bound_row("selectflip orthogonality tail (d = 1000)", summarize(fails), tail);
    row.note = "hypergeometric tail bound exp(-4 r_n (d/n)^2 delta^2)";
    rows.push_back(row);
  }
  return rows;
}

double exact_packing_log_ratio(double n, double r, double b) {
  auto lc = [](double a, double k) {
    return std::lgamma(a + 1.0) - std::lgamma(k + 1.0) - std::lgamma(a - k + 1.0);
  };
  return lc(n, r) - lc(r, b / 4.0) - lc(n - r, b / 4.0);
}

std::vector<CheckRow> packing_grid(const VerifyOptions&) {
  std::size_t points = 0, ordered = 0, close = 0;
  double worst_rel = 0.0, worst_lower = 0.0, worst_upper = 0.0;
  std::string worst_case;
  for (std::size_t n : {1000u, 2000u, 5000u, 10000u, 100000u}) {
    for (double rate : {0.015, 0.05, 0.1, 0.2}) {
      const auto r = static_cast<std::size_t>(std::llround(rate * static_cast<double>(n)));
      for (double frac : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const auto b = static_cast<std::size_t>(std::llround(frac * 2.0 * static_cast<double>(r)));
        const double upper = bounds::capacity_upper_bound(n, r, b);
        const double lower = bounds::datadep_capacity_lower(n, r, b);
        const double exact = exact_packing_log_ratio(static_cast<double>(n), static_cast<double>(r),
                                                     static_cast<double>(b));
        ++points;
        if (lower <= upper) ++ordered;
        const double rel = std::abs(upper - exact) / std::abs(exact);
        if (rel <= 0.05) ++close;
        if (rel > worst_rel) {
          worst_rel = rel;
          worst_upper = upper;
          worst_lower = exact;
          worst_case = "n=" + std::to_string(n) + " r=" + std::to_string(r) + " b=" + std::to_string(b);
        }
      }
    }
  }
  CheckRow order;
  order.name = "datadep lower <= capacity upper";
  order.empirical = static_cast<double>(ordered);
  order.analytic = static_cast<double>(points);
  order.pass = ordered == points && points >= 100;
  order.note = "grid points satisfying the ordering";
  CheckRow stirling;
  stirling.name = "Stirling form vs exact packing ratio";
  stirling.empirical = worst_rel;
  stirling.analytic = 0.0;
  stirling.tolerance = 0.05;
  stirling.pass = close == points;
  stirling.note = "worst relative error at " + worst_case + " (main term " + fmt(worst_upper) +
                  ", exact " + fmt(worst_lower) + ")";
  return {order, stirling};
}

std::vector<CheckRow> datadep_search(const VerifyOptions& opts) {
  constexpr std::size_t n = 200, r_n = 20, b_n = 10, items = 16, seeds = 100;
  std::vector<int> success(seeds, 0), verified(seeds, 0);
  parallel_for(seeds, opts.threads, [&](std::size_t s) {
    const SeedPath root = SeedPath(opts.seed).child("datadep", s);
    std::vector<BitVector> xs;
    for (std::size_t i = 0; i < items; ++i) xs.push_back(random_bitvector(n, 0.5, root.child("item", i)));
    const InputSet set(n, std::move(xs));
    const auto result = search_orthogonal_map(set, r_n, b_n, 10000, root.child("search"));
    success[s] = result.success ? 1 : 0;
    verified[s] = result.success && verify_map(result.map, set, r_n, b_n).ok ? 1 : 0;
  });
  const int ok = std::accumulate(success.begin(), success.end(), 0);
  const int good = std::accumulate(verified.begin(), verified.end(), 0);
  CheckRow row;
  row.name = "datadep search n=200 r=20 b=10 |S|=16";
  row.empirical = ok;
  row.analytic = 99;
  row.pass = ok >= 99 && good == ok;
  row.note = std::to_string(good) + " of " + std::to_string(ok) + " returned maps verified";
  return {row};
}

struct UnionSetup {
  mc::ExperimentConfig cfg;
  SmaParams params;
  std::string label;
};

UnionSetup union_setup(mc::AllocatorKind kind, const VerifyOptions& opts) {
  UnionSetup s;
  constexpr std::size_t n = 2000;
  s.cfg.master_seed = opts.seed;
  s.cfg.threads = opts.threads;
  s.cfg.density_grid = {0.3, 0.4, 0.5};
  s.params.r_n = 100;
  if (kind == mc::AllocatorKind::select_flip) {
    s.label = "selectflip";
    s.cfg.allocator = {kind, n, 0.05, 0.5, 0.5, 100};
    s.params.delta = 0.25;
    s.params.mu = 1.0;
    s.params.a_n = 600;
    s.params.b_n = 22;
  } else {
    s.label = "neural";
    const double p = 0.05;
    const auto net = compute_network_params(n, p, 100, 0.3, 0.5);
    s.cfg.allocator = {kind, n, p, 0.5, net.c2, 100};
    s.params.delta = 0.25;
    s.params.mu = 48.0;
    s.params.a_n = 600;
    s.params.b_n = 100;
  }
  return s;
}

std::vector<CheckRow> union_bound(mc::AllocatorKind kind, const VerifyOptions& opts) {
  auto setup = union_setup(kind, opts);
  const bool neural = kind == mc::AllocatorKind::neural;
  auto rate_cfg = setup.cfg;
  rate_cfg.trials = trials_or(opts, neural ? 400 : 20000);
  const auto rates = mc::event_rates(rate_cfg, setup.params);
  std::vector<CheckRow> rows;
  for (std::size_t k : {2u, 4u, 8u, 16u}) {
    auto cfg = setup.cfg;
    cfg.trials = trials_or(opts, neural ? 100 : 2000);
    const auto probe = mc::capacity_probe(cfg, setup.params, k);
    const double factor = static_cast<double>(k * k + 2 * k);
    CheckRow row;
    row.name = setup.label + " union bound K=" + std::to_string(k);
    row.empirical = probe.failure.mean;
    row.analytic = factor * rates.eps_hat;
    row.tolerance = 3.0 * std::hypot(probe.failure.std_error, factor * rates.eps_hat_se);
    row.pass = row.empirical <= row.analytic + row.tolerance;
    row.note = "eps_hat = " + fmt(rates.eps_hat) + " (stability " + fmt(rates.item_stability.mean) +
               ", continuity " + fmt(rates.item_continuity.mean) + ", orthogonality " +
               fmt(rates.pair_orthogonality.mean) + ")";
    rows.push_back(row);
  }
  return rows;
}

std::vector<CheckRow> union_bound_both(const VerifyOptions& opts) {
  auto rows = union_bound(mc::AllocatorKind::select_flip, opts);
  auto more = union_bound(mc::AllocatorKind::neural, opts);
  rows.insert(rows.end(), more.begin(), more.end());
  return rows;
}

const char* const kTitles[kCriterionCount] = {
    "layer densities of the reference network",
    "expansion rate against input distance",
    "output threshold from the network formula",
    "zero atom of the sign sum: DP, bound and simulation",
    "overlap flip probability against simulation",
    "Gaussian flip probability against the pair model",
    "select-flip continuity, stability and orthogonality",
    "random-map threshold against the packing bound",
    "Data-dependent search",
    "Union-bound consistency",
};

// Collapses a criterion to its least favourable row for the lemma summary.
CheckRow worst_of(std::vector<CheckRow> rows, const std::string& name) {
  auto score = [](const CheckRow& r) {
    if (!r.pass) return 2.0;
    return r.tolerance > 0.0 ? std::abs(r.empirical - r.analytic) / r.tolerance : 0.0;
  };
  auto worst = *std::max_element(rows.begin(), rows.end(), [&](const CheckRow& a, const CheckRow& b) {
    return score(a) < score(b);
  });
  const bool all = std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
  worst.note = "worst of " + std::to_string(rows.size()) + " cases: " + worst.name;
  worst.name = name;
  worst.pass = all;
  return worst;
}

}  // namespace

bool Criterion::pass() const {
  return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
}

Criterion run_criterion(int id, const VerifyOptions& opts) {
  if (id < 1 || id > kCriterionCount) throw UsageError("criterion id must be in 1.." + std::to_string(kCriterionCount));
  static const std::function<std::vector<CheckRow>(const VerifyOptions&)> runners[kCriterionCount] = {
      layer_density_rows, expansion_rows, c2_crosscheck, lemma1_grid, lemma3_grid, lemma4_grid,
      select_flip_properties, packing_grid, datadep_search, union_bound_both,
  };
  return {id, kTitles[id - 1], runners[id - 1](opts)};
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"lemmas", "selectflip", "neural", "datadep", "all"};
  return names;
}

std::vector<CheckRow> run_suite(const std::string& suite, const VerifyOptions& opts) {
  std::vector<CheckRow> rows;
  auto append = [&](std::vector<CheckRow> more) { rows.insert(rows.end(), more.begin(), more.end()); };
  const bool all = suite == "all";
  if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end()) {
    throw UsageError("unknown suite '" + suite + "' (expected lemmas, selectflip, neural, datadep or all)");
  }
  if (all || suite == "lemmas") {
    rows.push_back(worst_of(lemma1_grid(opts), "lemma1"));
    rows.push_back(lemma2_row(opts));
    rows.back().name = "lemma2";
    rows.push_back(worst_of(lemma3_grid(opts), "lemma3"));
    rows.push_back(worst_of(lemma4_grid(opts), "lemma4"));
  }
  if (all || suite == "selectflip") {
    append(select_flip_properties(opts));
    append(union_bound(mc::AllocatorKind::select_flip, opts));
  }
  if (all || suite == "neural") {
    append(c2_crosscheck(opts));
    append(layer_density_rows(opts));
    append(expansion_rows(opts));
    append(union_bound(mc::AllocatorKind::neural, opts));
  }
  if (all || suite == "datadep") {
    append(packing_grid(opts));
    append(datadep_search(opts));
  }
  return rows;
}

}  // namespace sma::verify
