#pragma once

#include <cstddef>
#include <functional>

namespace sma {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;  // Kronrod-Gauss difference summed over intervals
  std::size_t intervals = 0;
  bool converged = false;
};

// Globally adaptive 15-point Gauss-Kronrod: the interval with the largest
// error estimate is bisected until the total estimate drops below abs_tol or
// max_intervals is reached (converged == false in that case).
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol = 1e-10, std::size_t max_intervals = 2000);

}  // namespace sma
