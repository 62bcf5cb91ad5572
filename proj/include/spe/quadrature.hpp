#pragma once
// Globally adaptive Gauss-Kronrod (7/15) quadrature for real- or complex-valued
// integrands on a finite interval.

#include <array>
#include <cmath>
#include <complex>
#include <queue>
#include <vector>

namespace spe {

template <typename Value>
struct QuadratureResult {
  Value value{};
  double error = 0.0;
  int intervals = 0;
  bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd Kronrod nodes (indices 1, 3, 5, 7).
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename Value>
double magnitude(const Value& v) {
  return std::abs(v);
}

template <typename Value>
struct Segment {
  double a, b;
  Value value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <typename Value, typename F>
Segment<Value> kronrod15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  Value kronrod = kKronrodWeights[7] * f(center);
  Value gauss = kGaussWeights[3] * f(center);
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const Value sum = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[i] * sum;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * sum;
  }
  return {a, b, kronrod * half, magnitude((kronrod - gauss) * half)};
}

}  // namespace detail

/// Bisects the interval with the largest error estimate until the summed
/// estimate falls below `abs_tol` or `max_intervals` is reached.
template <typename Value, typename F>
QuadratureResult<Value> integrate_adaptive(F f, double a, double b, double abs_tol,
                                           int max_intervals = 2000) {
  std::priority_queue<detail::Segment<Value>> heap;
  auto first = detail::kronrod15<Value>(f, a, b);
  Value total = first.value;
  double error = first.error;
  heap.push(first);
  while (error > abs_tol && static_cast<int>(heap.size()) < max_intervals) {
    auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = detail::kronrod15<Value>(f, worst.a, mid);
    auto right = detail::kronrod15<Value>(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed the round-off accumulated by the incremental updates.
  Value sum{};
  double err = 0.0;
  const int n = static_cast<int>(heap.size());
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  return {sum, err, n, err <= abs_tol};
}

}  // namespace spe
