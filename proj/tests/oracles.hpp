#pragma once

// Reference computations used by the tests. Each is written from the
// underlying probability model, sharing no code with the library.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline double log_choose(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

inline double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }
inline double cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Binary entropy in nats.
inline double h(double q) {
  if (q <= 0.0 || q >= 1.0) return 0.0;
  return -q * std::log(q) - (1.0 - q) * std::log(1.0 - q);
}

// Pr{sum of m i.i.d. steps in {+1, 0, -1} = target} with Pr{+1} = Pr{-1} = p,
// summed over the number of +1 steps in log space.
inline double walk_atom(std::size_t m, double p, int target) {
  double total = 0.0;
  for (std::size_t up = 0; up <= m; ++up) {
    const long long down = static_cast<long long>(up) - target;
    if (down < 0) continue;
    const auto d = static_cast<std::size_t>(down);
    if (up + d > m) break;
    const double rest = static_cast<double>(m - up - d);
    double lg = std::lgamma(m + 1.0) - std::lgamma(up + 1.0) - std::lgamma(d + 1.0) -
                std::lgamma(rest + 1.0) + static_cast<double>(up + d) * std::log(p);
    if (rest > 0.0) lg += rest * std::log1p(-2.0 * p);
    total += std::exp(lg);
  }
  return total;
}

inline double binomial_pmf(std::size_t n, double q, std::size_t k) {
  const double lg = log_choose(static_cast<double>(n), static_cast<double>(k)) +
                    static_cast<double>(k) * std::log(q) +
                    static_cast<double>(n - k) * std::log1p(-q);
  return std::exp(lg);
}

// Pr{X not in the open interval (lo, hi)} for X ~ Binomial(n, q).
inline double binomial_outside(std::size_t n, double q, double lo, double hi) {
  double inside = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    if (kd > lo && kd < hi) inside += binomial_pmf(n, q, k);
  }
  return 1.0 - inside;
}

// Pr{X = k} for X ~ Hypergeometric(population, successes, draws).
inline double hypergeometric_pmf(std::size_t population, std::size_t successes, std::size_t draws,
                                 std::size_t k) {
  const auto N = static_cast<double>(population);
  const auto K = static_cast<double>(successes);
  const auto n = static_cast<double>(draws);
  const auto kd = static_cast<double>(k);
  if (kd > K || kd > n || n - kd > N - K) return 0.0;
  return std::exp(log_choose(K, kd) + log_choose(N - K, n - kd) - log_choose(N, n));
}

// Probability that two independent uniform weight-r vectors of length n are
// within Hamming distance b: the distance is 2k with k the number of ones of
// one vector outside the other.
inline double sphere_close_pair(std::size_t n, std::size_t r, std::size_t b) {
  double q = 0.0;
  for (std::size_t k = 0; 2 * k <= b && k <= r; ++k) {
    q += std::exp(log_choose(static_cast<double>(r), static_cast<double>(k)) +
                  log_choose(static_cast<double>(n - r), static_cast<double>(k)) -
                  log_choose(static_cast<double>(n), static_cast<double>(r)));
  }
  return q;
}

// Composite Simpson rule with `panels` (even) subintervals.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      std::size_t panels) {
  const double w = (b - a) / static_cast<double>(panels);
  double sum = f(a) + f(b);
  for (std::size_t i = 1; i < panels; ++i) {
    sum += f(a + w * static_cast<double>(i)) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return sum * w / 3.0;
}

// Disagreement probability of the one-layer Gaussian model: the mean drive
// offset is (2c - 1) p n s1 scaled by its standard deviation. For c = 1/2
// this is the closed form arccos(1 - eta) / pi.
inline double gaussian_flip(double n, double c, double p, double eta) {
  const double v = (2.0 * c * c - 2.0 * c + 1.0) * p - (1.0 - 2.0 * c) * (1.0 - 2.0 * c) * p * p;
  const double shift = (2.0 * c - 1.0) * p * std::sqrt(n) / std::sqrt(v);
  const double s = std::sqrt(1.0 - eta / 2.0);
  const double lo = -12.0 * s;
  const double hi = 12.0 * s;
  auto f = [&](double t) {
    return phi(t / s) * cdf(-std::abs(std::numbers::sqrt2 * t - shift) / std::sqrt(eta));
  };
  return 2.0 / s * simpson(f, lo, hi, 400000);
}

inline double centered_flip(double eta) { return std::acos(1.0 - eta) / std::numbers::pi; }

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

inline MeanSe mean_se(const std::vector<double>& xs) {
  double m = 0.0;
  for (double x : xs) m += x;
  m /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  const double var = xs.size() > 1 ? ss / static_cast<double>(xs.size() - 1) : 0.0;
  return {m, std::sqrt(var / static_cast<double>(xs.size()))};
}

}  // namespace oracle
