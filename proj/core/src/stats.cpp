#include "sma/stats.hpp"

#include <cmath>
#include <vector>

namespace sma {

double pairwise_sum(std::span<const double> values) noexcept {
  if (values.size() <= 16) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

StatSummary summarize(std::span<const double> samples) {
  StatSummary s;
  s.count = samples.size();
  if (s.count == 0) return s;
  s.mean = pairwise_sum(samples) / static_cast<double>(s.count);
  if (s.count > 1) {
    std::vector<double> sq(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double d = samples[i] - s.mean;
      sq[i] = d * d;
    }
    const double var = pairwise_sum(sq) / static_cast<double>(s.count - 1);
    s.std_error = std::sqrt(var / static_cast<double>(s.count));
  }
  s.ci95_low = s.mean - 1.96 * s.std_error;
  s.ci95_high = s.mean + 1.96 * s.std_error;
  return s;
}

}  // namespace sma
