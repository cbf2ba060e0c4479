#include "sma/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "sma/errors.hpp"
#include "sma/normal.hpp"
#include "sma/quadrature.hpp"

namespace sma::bounds {

namespace {

// Checks shared by both sphere-packing forms.
double packing_exponent(std::size_t n, std::size_t r_n, std::size_t b_n, double beta_denominator) {
  if (r_n == 0 || r_n >= n) throw UsageError("requires 0 < r_n < n");
  if (b_n > 2 * r_n) throw UsageError("requires b_n <= 2 r_n");
  const double alpha = static_cast<double>(r_n) / static_cast<double>(n);
  const double beta = static_cast<double>(b_n) / (beta_denominator * static_cast<double>(r_n));
  const double inner = alpha * beta / (1.0 - alpha);
  if (inner > 1.0) {
    throw UsageError("alpha beta / (1 - alpha) = " + std::to_string(inner) +
                     " exceeds 1; entropy argument out of range");
  }
  return entropy(alpha) - alpha * entropy(beta) - (1.0 - alpha) * entropy(inner);
}

}  // namespace

double entropy(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw UsageError("entropy argument must lie in [0, 1]");
  if (q == 0.0 || q == 1.0) return 0.0;
  return -q * std::log(q) - (1.0 - q) * std::log1p(-q);
}

double log_binomial(double n, double k) {
  if (!(k >= 0.0 && k <= n)) throw UsageError("log_binomial requires 0 <= k <= n");
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double capacity_upper_bound(std::size_t n, std::size_t r_n, std::size_t b_n) {
  return static_cast<double>(n) * packing_exponent(n, r_n, b_n, 4.0);
}

double datadep_capacity_lower(std::size_t n, std::size_t r_n, std::size_t b_n) {
  return 0.5 * static_cast<double>(n) * packing_exponent(n, r_n, b_n, 2.0);
}

double error_prob_lower_bound(std::size_t n, std::size_t r_n, double delta, double mu,
                              double lambda) {
  if (n < 2) throw UsageError("requires n >= 2");
  if (!(lambda > 0.0 && lambda <= mu)) throw UsageError("requires 0 < lambda <= mu");
  if (!(delta > 0.0 && delta < 1.0)) throw UsageError("requires 0 < delta < 1");
  const double top = static_cast<double>(r_n) * (1.0 + delta);
  if (r_n == 0 || top > static_cast<double>(n)) throw UsageError("requires 0 < r_n (1 + delta) <= n");
  const double ratio = (mu - lambda) / (mu + lambda);
  if (ratio == 0.0) return 0.0;
  const double log_outputs =
      std::log(2.0 * static_cast<double>(r_n) * delta) + log_binomial(static_cast<double>(n), top);
  return -ratio * ratio * log_outputs / std::log(static_cast<double>(n));
}

std::size_t capacity_from_pairwise_error(double epsilon_n, double slack) {
  if (!(epsilon_n > 0.0 && epsilon_n <= 1.0)) throw UsageError("requires 0 < epsilon_n <= 1");
  if (!(slack > 0.0 && slack < 1.0)) throw UsageError("requires 0 < slack < 1");
  return static_cast<std::size_t>(std::floor(slack / std::sqrt(epsilon_n)));
}

TrinomialAtoms lemma1_exact(std::size_t m, double p, double cell_budget) {
  if (m == 0) throw UsageError("requires m >= 1");
  if (!(p > 0.0 && 2.0 * p <= 1.0)) throw UsageError("requires 0 < 2p <= 1");
  const double md = static_cast<double>(m);
  if (md * (md + 1.0) / 2.0 > cell_budget) {
    throw CapacityError("trinomial DP for m = " + std::to_string(m) +
                        " exceeds the cell budget; use the closed-form bound instead");
  }
  // The walk is symmetric, so only k >= 0 is stored: g[k] = Pr{S = k}.
  // Entries that fall below 1e-300 are flushed to zero and the support is
  // trimmed, which keeps the loop out of denormals for large m.
  constexpr double kFlush = 1e-300;
  const double stay = 1.0 - 2.0 * p;
  std::vector<double> g(m + 2, 0.0), next(m + 2, 0.0);
  g[0] = 1.0;
  std::size_t hi = 0;
  for (std::size_t step = 0; step < m; ++step) {
    const std::size_t top = hi + 1;
    next[0] = stay * g[0] + 2.0 * p * g[1];
    for (std::size_t k = 1; k <= top; ++k) {
      next[k] = p * g[k - 1] + stay * g[k] + p * g[k + 1];
    }
    hi = top;
    while (hi > 0 && next[hi] < kFlush) {
      next[hi] = 0.0;
      --hi;
    }
    std::swap(g, next);
    std::fill(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(hi + 2), 0.0);
  }
  return {g[0], m >= 1 ? g[1] : 0.0};
}

Lemma12Bounds lemma12_bounds(std::size_t m, double p) {
  if (m == 0) throw UsageError("requires m >= 1");
  if (!(p > 0.0)) throw UsageError("requires p > 0");
  const double pm = p * static_cast<double>(m);
  const double tail = std::exp(-2.0 * (2.0 * std::numbers::ln2 - 1.0) * pm);
  Lemma12Bounds b;
  b.stability_gap_bound = 1.0 / (2.0 * std::sqrt(std::numbers::pi * pm)) + 0.5 * tail;
  b.onebit_flip_bound =
      2.0 * std::sqrt(p / (std::numbers::pi * static_cast<double>(m))) + 2.0 * p * tail;
  return b;
}

double onebit_flip_exact(std::size_t m, double p) {
  const auto atoms = lemma1_exact(m, p);
  return p * (atoms.p_zero + atoms.p_one);
}

double sign_rule_firing_probability(std::size_t m, double p) {
  if (m == 0) return 0.0;
  return 0.5 * (1.0 - lemma1_exact(m, p).p_zero);
}

FlipProbability lemma3_flip_prob(std::size_t wx, std::size_t wy, std::size_t wxy) {
  if (wx == 0 || wy == 0) throw UsageError("requires |x|, |y| >= 1");
  if (wxy > std::min(wx, wy)) throw UsageError("requires |x & y| <= min(|x|, |y|)");
  double rho = static_cast<double>(wxy) / std::sqrt(static_cast<double>(wx) * static_cast<double>(wy));
  FlipProbability out;
  if (rho > 1.0) {
    rho = 1.0;
    out.clamped = true;
  }
  out.value = std::acos(rho) / std::numbers::pi;
  return out;
}

double sign_variance(double c, double p) {
  return (2.0 * c * c - 2.0 * c + 1.0) * p - (1.0 - 2.0 * c) * (1.0 - 2.0 * c) * p * p;
}

double lemma4_flip_prob(double n, double c, double p, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw UsageError("requires 0 < eta <= 1");
  if (!(n > 0.0)) throw UsageError("requires n > 0");
  const double v = sign_variance(c, p);
  if (!(v > 0.0)) throw UsageError("requires v(c, p) > 0");
  const double scale = std::sqrt(1.0 - 0.5 * eta);
  const double shift = (2.0 * c - 1.0) * p * std::sqrt(n) / std::sqrt(v);
  const double inv_root_eta = 1.0 / std::sqrt(eta);
  auto integrand = [&](double t) {
    return (2.0 / scale) * normal_pdf(t / scale) *
           normal_cdf(-inv_root_eta * std::abs(std::numbers::sqrt2 * t - shift));
  };
  const double lo = -10.0 * scale;
  const double hi = 10.0 * scale;
  const double kink = shift / std::numbers::sqrt2;
  constexpr double kTolerance = 1e-8;
  // For small eta the integrand is a spike of width sqrt(eta / 2) around the
  // kink, narrower than the spacing of the Kronrod nodes on [lo, hi]. Cut
  // points at geometric multiples of that width keep it from being missed.
  std::vector<double> cuts{lo, hi};
  const double width = std::sqrt(0.5 * eta);
  for (double k : {0.0, 1.0, 4.0, 16.0, 64.0}) {
    for (double side : {-1.0, 1.0}) {
      const double t = kink + side * k * width;
      if (t > lo && t < hi) cuts.push_back(t);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double value = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const auto part = integrate_adaptive(integrand, cuts[i], cuts[i + 1], kTolerance / 16.0, 4000);
    if (!part.converged) {
      std::ostringstream msg;
      msg << "flip-probability quadrature did not converge on [" << cuts[i] << ", " << cuts[i + 1]
          << "]: error estimate " << part.abs_error << " after " << part.intervals
          << " intervals (n=" << n << ", c=" << c << ", p=" << p << ", eta=" << eta << ")";
      throw NumericError(msg.str());
    }
    value += part.value;
  }
  return std::clamp(value, 0.0, 1.0);
}

double firing_probability_estimate(double n, double c, double p, double s1) {
  const double ps = p * s1;
  const double v = sign_variance(c, ps);
  if (!(v > 0.0)) throw UsageError("requires v(c, p s1) > 0");
  return normal_cdf(std::sqrt(n) * (1.0 - 2.0 * c) * ps / std::sqrt(v));
}

double orthogonality_constant(double rate, double b1) {
  if (!(rate > 0.0 && rate < 1.0)) throw UsageError("requires 0 < r_n / n < 1");
  const double z = normal_quantile(rate);
  const double root = std::sqrt(b1);
  const double scale = std::sqrt(1.0 - 0.5 * b1);
  const double mass = normal_cdf((z + root) / scale) - normal_cdf((z - root) / scale);
  return normal_cdf(-1.0) * mass / rate;
}

Theorem5Bounds theorem5_tail_bounds(const Theorem5Inputs& in) {
  if (in.r_n == 0 || in.r_n >= in.n) throw UsageError("requires 0 < r_n < n");
  if (!(in.s0 > 0.0 && in.s0 <= 1.0)) throw UsageError("requires 0 < s0 <= 1");
  if (!(in.gamma > 0.0 && in.gamma < 1.0)) throw UsageError("requires 0 < gamma < 1");
  if (!(in.t >= 1.0)) throw UsageError("requires t >= 1");
  if (!(in.a > 0.0 && in.a < 1.0)) throw UsageError("requires 0 < a < 1");
  if (in.distance == 0) throw UsageError("requires distance >= 1");
  const double n = static_cast<double>(in.n);
  const double r = static_cast<double>(in.r_n);
  auto log_b = [&](double x) {
    return in.log_base > 0.0 ? std::log(x) / std::log(in.log_base) : std::log(x);
  };

  Theorem5Bounds out;
  out.band_halfwidth = log_b(n / r) / std::sqrt(in.s0 * std::pow(n, 1.0 - in.gamma));
  if (!(in.epsilon > out.band_halfwidth)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "epsilon must exceed log(n/r_n)/sqrt(s0 n^(1-gamma)) = " << out.band_halfwidth
        << " (minimum feasible epsilon)";
    throw UsageError(msg.str());
  }
  const double gap = in.epsilon - out.band_halfwidth;
  out.stability = std::exp(-2.0 * n * gap * gap);

  const double log_n = log_b(n);
  out.mu_n = in.z0 * r * std::pow(in.s0, -0.25) * std::pow(n, -(1.0 + in.gamma) / 4.0) * log_n * log_n;
  const double rate = in.t * std::log(in.t) - (in.t - 1.0);
  out.continuity = std::exp(-rate * out.mu_n * std::sqrt(static_cast<double>(in.distance)));

  out.orthogonality = std::exp(-2.0 * n * in.epsilon * in.epsilon);
  out.b1 = std::acos(std::sqrt(1.0 - in.a)) / std::numbers::pi;
  out.b = orthogonality_constant(r / n, out.b1);
  return out;
}

}  // namespace sma::bounds
