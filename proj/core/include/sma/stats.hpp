#pragma once

#include <cstddef>
#include <span>

namespace sma {

// Aggregate of independent trials. ci95 = mean +- 1.96 * std_error. With a
// single trial the standard error is 0 and degenerate() reports it.
struct StatSummary {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;
  double ci95_low = 0.0;
  double ci95_high = 0.0;

  bool degenerate() const noexcept { return count < 2; }
};

// Pairwise summation keeps the result independent of how trials were
// scheduled, since samples are always consumed in index order.
double pairwise_sum(std::span<const double> values) noexcept;

StatSummary summarize(std::span<const double> samples);

}  // namespace sma
