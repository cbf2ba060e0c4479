#include <algorithm>
#include <cmath>
#include <set>
#include <thread>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "sma/errors.hpp"
#include "sma/parallel.hpp"
#include "sma/random.hpp"
#include "sma/seed.hpp"

TEST_CASE("seed paths are pure functions of their path") {
  const sma::SeedPath a(42);
  const sma::SeedPath b(42);
  CHECK(a.child("trial", 3).key() == b.child("trial", 3).key());
  CHECK(a.child("trial", 3).key() != a.child("trial", 4).key());
  CHECK(a.child("trial", 3).key() != a.child("input", 3).key());
  CHECK(a.child("x").child("y").key() != a.child("y").child("x").key());
  CHECK(sma::SeedPath(43).child("trial", 3).key() != a.child("trial", 3).key());
  CHECK(a.child("trial", 3).key() ==
        sma::SeedPath::derive(a.key(), sma::SeedPath::hash_label("trial"), 3));
  CHECK(a.child("row", 2).to_string() == "42/row:2");
}

TEST_CASE("uniform_below stays in range and is balanced") {
  sma::Rng rng(9);
  const std::uint64_t bound = 7;
  std::vector<int> counts(bound, 0);
  const int draws = 70000;
  for (int i = 0; i < draws; ++i) {
    const auto v = sma::uniform_below(rng, bound);
    REQUIRE(v < bound);
    ++counts[v];
  }
  double chi2 = 0.0;
  const double expected = static_cast<double>(draws) / bound;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < 22.5);  // 6 degrees of freedom, p ~ 0.001
  CHECK(sma::uniform_below(rng, 1) == 0);
}

TEST_CASE("bernoulli endpoints are exact") {
  sma::Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    CHECK_FALSE(sma::bernoulli(rng, 0.0));
    CHECK(sma::bernoulli(rng, 1.0));
  }
}

TEST_CASE("binomial draws match their mean and variance") {
  sma::Rng rng(17);
  std::vector<double> xs;
  for (int i = 0; i < 20000; ++i) xs.push_back(static_cast<double>(sma::binomial(rng, 400, 0.01)));
  const auto s = oracle::mean_se(xs);
  CHECK(std::abs(s.mean - 4.0) <= 3.0 * std::sqrt(400 * 0.01 * 0.99 / 20000.0));
  CHECK(sma::binomial(rng, 50, 0.0) == 0);
  CHECK(sma::binomial(rng, 50, 1.0) == 50);
}

TEST_CASE("sample_distinct returns distinct in-range indices and appends") {
  sma::Rng rng(4);
  sma::SampleScratch scratch(1000);
  std::vector<std::uint32_t> out{999999};
  sma::sample_distinct(rng, 1000, 300, out, scratch);
  REQUIRE(out.size() == 301);
  CHECK(out.front() == 999999);
  std::set<std::uint32_t> unique(out.begin() + 1, out.end());
  CHECK(unique.size() == 300);
  CHECK(*unique.rbegin() < 1000);
  const auto all = sma::sample_distinct(rng, 50, 50);
  CHECK(std::set<std::uint32_t>(all.begin(), all.end()).size() == 50);
  CHECK_THROWS_AS(sma::sample_distinct(rng, 5, 6), sma::UsageError);
}

TEST_CASE("sample_distinct inclusion frequency") {
  const std::uint32_t n = 20;
  const std::uint32_t k = 4;
  const int seeds = 10000;
  std::vector<int> hits(n, 0);
  const sma::SeedPath root(8);
  for (int s = 0; s < seeds; ++s) {
    sma::Rng rng = root.child("s", s).rng();
    for (auto i : sma::sample_distinct(rng, n, k)) ++hits[i];
  }
  const double q = static_cast<double>(k) / n;
  const double se = std::sqrt(q * (1 - q) / seeds);
  for (int h : hits) CHECK(std::abs(static_cast<double>(h) / seeds - q) <= 3.5 * se);
}

TEST_CASE("parallel_for writes every slot once and rethrows") {
  std::vector<int> out(1000, 0);
  sma::parallel_for(out.size(), 8, [&](std::size_t i) { out[i] += static_cast<int>(i); });
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i));
  CHECK_THROWS_AS(sma::parallel_for(100, 4,
                                    [](std::size_t i) {
                                      if (i == 37) throw sma::NumericError("boom");
                                    }),
                  sma::NumericError);
}
