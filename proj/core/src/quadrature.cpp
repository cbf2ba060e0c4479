#include "sma/quadrature.hpp"

#include <cmath>
#include <queue>
#include <vector>

namespace sma {

namespace {

// Nodes and weights for the 7-point Gauss / 15-point Kronrod pair on [-1, 1].
constexpr double kNodes[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                              0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                              0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                              0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kKronrod[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kGauss[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                              0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrod[7];
  double gauss = fc * kGauss[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kNodes[j];
    const double fsum = f(center - dx) + f(center + dx);
    kronrod += kKronrod[j] * fsum;
    if (j % 2 == 1) gauss += kGauss[j / 2] * fsum;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, std::size_t max_intervals) {
  std::priority_queue<Segment> heap;
  Segment first = gauss_kronrod(f, a, b);
  double total = first.value;
  double error = first.error;
  heap.push(first);
  while (error > abs_tol && heap.size() < max_intervals) {
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Segment left = gauss_kronrod(f, worst.a, mid);
    Segment right = gauss_kronrod(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum from the final partition so the value does not carry the rounding
  // of the running updates.
  QuadratureResult result;
  result.intervals = heap.size();
  std::vector<Segment> parts;
  while (!heap.empty()) {
    parts.push_back(heap.top());
    heap.pop();
  }
  for (const auto& s : parts) {
    result.value += s.value;
    result.abs_error += s.error;
  }
  result.converged = result.abs_error <= abs_tol;
  return result;
}

}  // namespace sma
