#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

// Closed-form evaluation of the capacity, error-probability and per-layer
// flip-probability results for stable memory allocators. Everything
// combinatorial is computed in the natural-log domain through lgamma, since
// C(10^5, 1500) is far outside double range.
namespace sma::bounds {

// One evaluated bound, as emitted by the CLI. Asymptotic results whose
// hidden constants are unknown carry asserted == false.
struct BoundReport {
  std::string name;
  std::vector<std::pair<std::string, double>> inputs;
  double value = 0.0;
  bool log_domain = false;
  bool asserted = true;
  std::vector<std::pair<std::string, double>> extras;
  std::vector<std::string> notes;
};

// Natural-log binary entropy; H(0) = H(1) = 0.
double entropy(double q);

// log C(n, k) for real arguments, 0 <= k <= n.
double log_binomial(double n, double k);

// Main term (o(1) dropped) of the strong-stability capacity bound
//   log K_n <= n (H(a) - a H(b) - (1 - a) H(a b / (1 - a))),
// a = r_n / n, b = B_n / (4 r_n).
double capacity_upper_bound(std::size_t n, std::size_t r_n, std::size_t b_n);

// Threshold on log |S_n| below which a uniformly random map into the weight-r_n
// sphere keeps all pairwise output distances above B_n with positive
// probability: (1/2) n (H(a) - a H(b) - (1 - a) H(a b / (1 - a))) with
// b = B_n / (2 r_n). Note the gap normalization differs from the upper bound.
double datadep_capacity_lower(std::size_t n, std::size_t r_n, std::size_t b_n);

// log of the main term of the pairwise-error lower bound for bi-Lipschitz
// allocators:
//   -((mu - lambda)/(mu + lambda))^2 / log n * log(2 r_n delta C(n, r_n (1 + delta))).
// The Omega constant is not included.
double error_prob_lower_bound(std::size_t n, std::size_t r_n, double delta, double mu,
                              double lambda);

// floor(slack / sqrt(epsilon_n)); slack stands in for the vanishing sequence
// xi_n and must be chosen by the caller.
std::size_t capacity_from_pairwise_error(double epsilon_n, double slack);

// Pr{beta^T x = 0} and Pr{beta^T x = 1} for |x| = m and beta_i in {+1, 0, -1}
// with probabilities p, 1 - 2p, p.
struct TrinomialAtoms {
  double p_zero = 0.0;
  double p_one = 0.0;
};

// Exact dynamic program over the m-step trinomial walk. Throws CapacityError
// when the number of DP cells would exceed `cell_budget`.
TrinomialAtoms lemma1_exact(std::size_t m, double p, double cell_budget = 2.0e9);

struct Lemma12Bounds {
  // 1/(2 sqrt(pi p m)) + (1/2) exp(-2 (2 ln 2 - 1) p m), bounds 1/2 - Pr{beta^T x > 0}
  double stability_gap_bound = 0.0;
  // 2 sqrt(p / (pi m)) + 2 p exp(-2 (2 ln 2 - 1) p m), bounds a one-bit flip
  double onebit_flip_bound = 0.0;
};
Lemma12Bounds lemma12_bounds(std::size_t m, double p);

// Exact probability that a single added input bit changes the sign-rule output:
// p (Pr{beta^T x = 0} + Pr{beta^T x = 1}).
double onebit_flip_exact(std::size_t m, double p);

// Exact middle-layer firing probability at C = 1/2: (1 - Pr{beta^T x = 0}) / 2.
double sign_rule_firing_probability(std::size_t m, double p);

struct FlipProbability {
  double value = 0.0;
  bool clamped = false;  // correlation fell outside [-1, 1] through rounding
};

// (1/pi) arccos(|x & y| / sqrt(|x| |y|)).
FlipProbability lemma3_flip_prob(std::size_t wx, std::size_t wy, std::size_t wxy);

// Variance of one weight beta_i in {1 - c, -c, 0} with probabilities p, p, 1 - 2p:
// v(c, p) = (2c^2 - 2c + 1) p - (1 - 2c)^2 p^2.
double sign_variance(double c, double p);

// Gaussian approximation of the disagreement probability after one layer with
// divisive threshold c, for inputs whose coordinates disagree at rate eta:
//   (2 / s) Int phi(t / s) Phi(-|sqrt(2) t - (2c - 1) p sqrt(n) / sqrt(v)| / sqrt(eta)) dt,
// s = sqrt(1 - eta / 2). Adaptive Gauss-Kronrod on [-10 s, 10 s]; throws
// NumericError if the error estimate does not drop below 1e-8.
double lemma4_flip_prob(double n, double c, double p, double eta);

// Normal approximation of an output neuron's firing probability when a
// fraction s1 of the previous layer is active:
//   Phi(sqrt(n) (1 - 2c) p s1 / sqrt(v(c, p s1))).
double firing_probability_estimate(double n, double c, double p, double s1);

struct Theorem5Inputs {
  std::size_t n = 0;
  std::size_t r_n = 0;
  double s0 = 0.0;       // minimum input density
  double gamma = 0.0;    // p = n^{-gamma}
  double epsilon = 0.0;  // stability / orthogonality deviation
  double t = 1.0;        // continuity multiplier, t >= 1
  double z0 = 1.0;       // constant in mu_n
  double a = 0.1;        // orthogonality input gap fraction, A_n = a n
  std::size_t distance = 1;  // d_H(x, y) in the continuity bound
  double log_base = 0.0;     // base of log(n / r_n) and log n; 0 means e
};

struct Theorem5Bounds {
  double stability = 0.0;      // exp(-2n (eps - w)^2), w = log(n/r_n)/sqrt(s0 n^{1-gamma})
  double continuity = 0.0;     // exp(-(t ln t - (t - 1)) mu_n sqrt(d))
  double orthogonality = 0.0;  // exp(-2 n eps^2)
  double b = 0.0;              // orthogonality constant from b1
  double b1 = 0.0;             // (1/pi) arccos(sqrt(1 - a))
  double band_halfwidth = 0.0; // w above; also the minimum feasible epsilon
  double mu_n = 0.0;
};

// Throws UsageError naming the minimum feasible epsilon when
// epsilon <= band_halfwidth.
Theorem5Bounds theorem5_tail_bounds(const Theorem5Inputs& in);

// Lower-bound constant b such that Pr{h(x)_i != h(z)_i} >= b r_n / n:
//   Phi(-1) [Phi((z + sqrt(b1)) / s) - Phi((z - sqrt(b1)) / s)] / (r_n / n),
// z = Phi^{-1}(r_n / n), s = sqrt(1 - b1 / 2).
double orthogonality_constant(double rate, double b1);

}  // namespace sma::bounds
