#pragma once

namespace sma {

double normal_pdf(double x) noexcept;
// Phi(x), accurate in both tails (erfc based).
double normal_cdf(double x) noexcept;
// Phi^{-1}(p) for p in (0, 1); relative error below 1e-13 after one Halley
// step. Throws UsageError for p outside (0, 1).
double normal_quantile(double p);

}  // namespace sma
