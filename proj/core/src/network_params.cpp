#include <cmath>

#include "sma/errors.hpp"
#include "sma/neural.hpp"
#include "sma/normal.hpp"

namespace sma {

NetworkParams compute_network_params(std::size_t n, double p, std::size_t r_n, double s0,
                                     double gamma, double z0, double log_base) {
  if (r_n == 0 || r_n >= n) {
    throw UsageError("r_n / n must lie strictly between 0 and 1 (Phi^{-1} diverges otherwise)");
  }
  if (!(p > 0.0)) throw UsageError("p must be positive");
  const double nd = static_cast<double>(n);
  if (nd * p < 1.0) throw UsageError("n p must be at least 1");
  if (!(s0 > 0.0 && s0 <= 1.0)) throw UsageError("s0 must lie in (0, 1]");
  if (!(gamma > 0.0 && gamma < 1.0)) throw UsageError("gamma must lie in (0, 1)");
  if (!(z0 > 0.0)) throw UsageError("z0 must be positive");

  NetworkParams out;
  out.z0 = z0;
  out.s = normal_quantile(static_cast<double>(r_n) / nd) * std::sqrt(2.0 / (nd * p));
  if (out.s * out.s >= 2.0) throw UsageError("s^2 >= 2: threshold C2 undefined for these inputs");
  out.c2 = 0.5 - out.s / (2.0 * std::sqrt(2.0 - out.s * out.s));
  const double log_n = log_base > 0.0 ? std::log(nd) / std::log(log_base) : std::log(nd);
  out.mu_n = z0 * static_cast<double>(r_n) * std::pow(s0, -0.25) *
             std::pow(nd, -(1.0 + gamma) / 4.0) * log_n * log_n;
  return out;
}

}  // namespace sma
