#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "sma/bounds.hpp"
#include "sma/errors.hpp"
#include "sma/mc.hpp"

namespace mc = sma::mc;

namespace {

mc::ExperimentConfig small_neural(std::size_t trials) {
  mc::ExperimentConfig cfg;
  cfg.allocator.kind = mc::AllocatorKind::neural;
  cfg.allocator.n = 4000;
  cfg.allocator.p = 0.03;
  cfg.allocator.c1 = 0.5;
  cfg.allocator.c2 = 0.57;
  cfg.trials = trials;
  cfg.master_seed = 99;
  cfg.density_grid = {0.1, 0.3, 0.5};
  cfg.distance_grid = {1, 10, 100};
  return cfg;
}

mc::ExperimentConfig reference_config() {
  mc::ExperimentConfig cfg;
  cfg.trials = 10;
  cfg.master_seed = sma::kDefaultMasterSeed;
  for (int k = 1; k <= 10; ++k) cfg.density_grid.push_back(0.05 * k);
  cfg.distance_grid = {1, 3, 10, 30, 100};
  cfg.threads = std::max(1U, std::thread::hardware_concurrency());
  return cfg;
}

}  // namespace

TEST_CASE("allocator kinds parse") {
  CHECK(mc::parse_allocator_kind("neural") == mc::AllocatorKind::neural);
  CHECK(mc::parse_allocator_kind("select-flip") == mc::AllocatorKind::select_flip);
  CHECK(mc::parse_allocator_kind("select_flip") == mc::AllocatorKind::select_flip);
  CHECK_THROWS_AS(mc::parse_allocator_kind("dense"), sma::UsageError);
}

TEST_CASE("experiment configs are validated") {
  auto cfg = small_neural(2);
  cfg.trials = 0;
  CHECK_THROWS_AS(cfg.validate(), sma::UsageError);
  cfg = small_neural(2);
  cfg.density_grid.clear();
  CHECK_THROWS_AS(cfg.validate(), sma::UsageError);
  cfg = small_neural(2);
  cfg.kappa = 0.2;
  CHECK_THROWS_AS(cfg.validate(), sma::UsageError);
  cfg = small_neural(2);
  cfg.distance_grid = {0};
  CHECK_THROWS_AS(mc::expansion_curve(cfg), sma::UsageError);
}

TEST_CASE("stability curve is independent of the thread count") {
  auto cfg = small_neural(4);
  const auto one = mc::stability_curve(cfg);
  cfg.threads = 8;
  const auto many = mc::stability_curve(cfg);
  REQUIRE(one.size() == 3);
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].layer2.mean == many[i].layer2.mean);
    CHECK(one[i].output.mean == many[i].output.mean);
    CHECK(one[i].output.std_error == many[i].output.std_error);
    CHECK(one[i].output.count == 4);
  }
}

TEST_CASE("a single trial gives degenerate summaries") {
  const auto rows = mc::stability_curve(small_neural(1));
  for (const auto& r : rows) {
    CHECK(r.layer2.degenerate());
    CHECK(r.output.std_error == 0.0);
  }
}

TEST_CASE("zero input density gives a silent output") {
  auto cfg = small_neural(2);
  cfg.density_grid = {0.0};
  const auto rows = mc::stability_curve(cfg);
  CHECK(rows[0].output.mean == 0.0);
  CHECK(rows[0].layer2.mean == 0.0);
}

TEST_CASE("lowering the output threshold raises the output density") {
  double previous = 0.0;
  for (double c2 : {0.6, 0.57, 0.55, 0.53, 0.5}) {
    auto cfg = small_neural(3);
    cfg.allocator.c2 = c2;
    const auto rows = mc::stability_curve(cfg);
    double total = 0.0;
    for (const auto& r : rows) total += r.output.mean;
    CHECK(total > previous);
    previous = total;
  }
}

TEST_CASE("standard errors shrink with the square root of the trial count") {
  auto cfg = small_neural(25);
  cfg.allocator.n = 2000;
  cfg.allocator.p = 0.05;
  cfg.density_grid = {0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};
  cfg.threads = 8;
  const auto few = mc::stability_curve(cfg);
  cfg.trials = 100;
  cfg.master_seed = 7;
  const auto many = mc::stability_curve(cfg);
  double ratio = 0.0;
  for (std::size_t i = 0; i < few.size(); ++i) ratio += few[i].layer2.std_error / many[i].layer2.std_error;
  ratio /= static_cast<double>(few.size());
  CHECK(ratio == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("expansion rows are sorted, positive and finite") {
  auto cfg = small_neural(3);
  const auto rows = mc::expansion_curve(cfg);
  REQUIRE(rows.size() == 9);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const bool ordered = rows[i - 1].input_density < rows[i].input_density ||
                         (rows[i - 1].input_density == rows[i].input_density &&
                          rows[i - 1].distance < rows[i].distance);
    CHECK(ordered);
  }
  for (const auto& r : rows) {
    CHECK(std::isfinite(r.expansion.mean));
    CHECK(r.expansion.mean > 0.0);
  }
  cfg.distance_grid = {10};
  CHECK(mc::expansion_curve(cfg).size() == 3);
  cfg.threads = 8;
  cfg.distance_grid = {1, 10, 100};
  const auto threaded = mc::expansion_curve(cfg);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(threaded[i].expansion.mean == rows[i].expansion.mean);
}

TEST_CASE("select-flip pairwise events") {
  mc::ExperimentConfig cfg;
  cfg.allocator.kind = mc::AllocatorKind::select_flip;
  cfg.allocator.n = 2000;
  cfg.allocator.r_n = 100;
  cfg.trials = 20000;
  cfg.master_seed = 5;
  cfg.density_grid = {0.5};
  cfg.threads = 8;
  sma::SmaParams params;
  params.delta = 0.1;
  params.mu = 1.0;
  params.a_n = 100;
  params.b_n = 10;
  params.r_n = 100;
  const auto [x, y] = sma::random_pair_at_distance(2000, 0.5, 400, sma::SeedPath(6));
  const auto e = mc::pairwise_error_estimate(cfg, params, x, y);
  CHECK(e.continuity.mean == 0.0);
  const double chernoff = 2.0 * std::exp(-2.0 * std::pow(0.1 * 100, 2) / 200.0);
  CHECK(e.stability.mean <= chernoff + 3.0 * e.stability.std_error);
  REQUIRE(e.orthogonality.has_value());
  CHECK(e.orthogonality->mean < 1e-3);
}

TEST_CASE("separated items keep their distance") {
  const auto items = mc::draw_separated_items(500, 12, {0.3, 0.5}, 150, sma::SeedPath(7));
  REQUIRE(items.size() == 12);
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (std::size_t j = i + 1; j < items.size(); ++j) CHECK(sma::hamming_distance(items[i], items[j]) > 150);
  }
  CHECK_THROWS_AS(mc::draw_separated_items(100, 5, {0.5}, 95, sma::SeedPath(8), 20), sma::UsageError);
}

TEST_CASE("select-flip capacity failures vanish as n grows") {
  std::vector<double> rates;
  for (std::size_t n : {200U, 400U, 800U}) {
    const double frac = 2.0 * (n / 4) / static_cast<double>(n);
    const double a = 0.3;
    const double delta = 0.25;
    const double k_raw = 0.1 * std::exp(frac * a * a * delta * delta * static_cast<double>(n));
    const auto k = std::clamp<std::size_t>(static_cast<std::size_t>(k_raw), 2, 1000);
    mc::ExperimentConfig cfg;
    cfg.allocator.kind = mc::AllocatorKind::select_flip;
    cfg.allocator.n = n;
    cfg.allocator.r_n = n / 4;
    cfg.trials = 400;
    cfg.master_seed = 11;
    cfg.density_grid = {0.5};
    cfg.threads = 8;
    sma::SmaParams params;
    params.delta = delta;
    params.mu = 1.0;
    params.a_n = static_cast<std::size_t>(a * n);
    params.r_n = n / 4;
    params.b_n = static_cast<std::size_t>((1.0 - delta) * frac * a * n);
    const auto probe = mc::capacity_probe(cfg, params, k);
    CHECK(probe.set_size == k);
    CHECK(probe.continuity_failure.mean == 0.0);
    rates.push_back(probe.failure.mean);
  }
  MESSAGE("failure rates " << rates[0] << " " << rates[1] << " " << rates[2]);
  CHECK(rates[2] <= rates[0]);
  CHECK(rates[2] < 0.05);
}

TEST_CASE("lemma simulations agree with exact values") {
  const sma::SeedPath seed(12);
  mc::LemmaParams params;
  const auto l1 = mc::lemma_check(1, params, 100000, seed, 8);
  CHECK(std::abs(l1.empirical.mean - l1.exact) <= 3.0 * l1.empirical.std_error);
  CHECK(l1.empirical.mean <= l1.analytic + 3.0 * l1.empirical.std_error);
  const auto l2 = mc::lemma_check(2, params, 100000, seed, 8);
  CHECK(std::abs(l2.empirical.mean - l2.exact) <= 3.0 * l2.empirical.std_error + 1e-5);
  const auto l3 = mc::lemma_check(3, params, 100000, seed, 8);
  CHECK(l3.analytic == doctest::Approx(0.1436).epsilon(3e-3));
  CHECK(l3.abs_gap <= 0.01);
  params.c = 0.5;
  const auto l4 = mc::lemma_check(4, params, 100000, seed, 8);
  CHECK(l4.analytic == doctest::Approx(oracle::centered_flip(params.eta)).epsilon(1e-6));
  CHECK(l4.abs_gap <= 0.02);
  const auto again = mc::lemma_check(4, params, 100000, seed, 1);
  CHECK(again.empirical.mean == l4.empirical.mean);
}

// Output density should not depend on the input density. At the reference
// parameters the drift across the grid exceeds three standard errors, so this
// is recorded as a known discrepancy rather than hidden.
TEST_CASE("output density is flat across input densities" * doctest::should_fail()) {
  const auto rows = mc::stability_curve(reference_config());
  double lo = 1.0;
  double hi = 0.0;
  double se = 0.0;
  for (const auto& r : rows) {
    lo = std::min(lo, r.output.mean);
    hi = std::max(hi, r.output.mean);
    se = std::max(se, r.output.std_error);
  }
  MESSAGE("output density range " << lo << " .. " << hi << ", largest standard error " << se);
  CHECK(hi - lo <= 3.0 * std::sqrt(2.0) * se);
}

namespace {

struct PipelineRow {
  double density;
  double measured;
  double predicted;
};

std::vector<PipelineRow> pipeline(std::size_t distance) {
  auto cfg = reference_config();
  cfg.density_grid = {0.05, 0.2, 0.5};
  cfg.distance_grid = {distance};
  const auto rows = mc::expansion_curve(cfg);
  std::vector<PipelineRow> out;
  const double n = 1e5;
  for (const auto& r : rows) {
    const auto wx = static_cast<std::size_t>(r.input_density * n);
    double eta = 0.0;
    if (distance == 1) {
      eta = sma::bounds::onebit_flip_exact(wx, 2.5e-3);
    } else {
      // Toggling L random coordinates turns on about L (1 - s) and off about L s.
      const double on = static_cast<double>(distance) * (1.0 - r.input_density);
      const double off = static_cast<double>(distance) * r.input_density;
      const auto wy = static_cast<std::size_t>(std::lround(static_cast<double>(wx) + on - off));
      const auto shared = static_cast<std::size_t>(std::lround(static_cast<double>(wx) - off));
      eta = sma::bounds::lemma3_flip_prob(wx, wy, shared).value;
    }
    const double flips = n * sma::bounds::lemma4_flip_prob(n, 0.57, 2.5e-3, eta);
    out.push_back({r.input_density, r.expansion.mean, flips / static_cast<double>(distance)});
  }
  return out;
}

}  // namespace

// The Gaussian approximation assumes many differing synapses per output
// neuron; at distance 1 there are far fewer than one, and the prediction
// overshoots the measured rate by more than the 30% tolerance.
TEST_CASE("unit-distance expansion matches the layer-wise prediction" * doctest::should_fail()) {
  for (const auto& r : pipeline(1)) {
    MESSAGE("density " << r.density << ": measured " << r.measured << ", predicted " << r.predicted);
    CHECK(r.measured == doctest::Approx(r.predicted).epsilon(0.3));
  }
}

TEST_CASE("distance-100 expansion matches the layer-wise prediction") {
  for (const auto& r : pipeline(100)) {
    MESSAGE("density " << r.density << ": measured " << r.measured << ", predicted " << r.predicted);
    CHECK(r.measured == doctest::Approx(r.predicted).epsilon(0.3));
  }
}
