#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <queue>
#include <vector>

namespace dfeg {

template <class T>
struct QuadratureResult {
  T value{};
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
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T, class F>
std::pair<T, double> gk15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const T fc = f(c);
  T kron = fc * kKronrodWeights[7];
  T gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kKronrodNodes[j];
    const T f1 = f(c - dx);
    const T f2 = f(c + dx);
    kron += (f1 + f2) * kKronrodWeights[j];
    if (j % 2 == 1) gauss += (f1 + f2) * kGaussWeights[j / 2];
  }
  return {kron * h, std::abs((kron - gauss) * h)};
}

}  // namespace detail

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature on [a, b]. T may be
/// real or complex. Stops when the summed error estimate falls below
/// max(abs_tol, rel_tol*|I|) or max_intervals is reached.
template <class T, class F>
QuadratureResult<T> integrate_adaptive(F&& f, double a, double b, double rel_tol,
                                       double abs_tol = 0.0, int max_intervals = 2000) {
  struct Piece {
    double a, b;
    T value;
    double error;
    bool operator<(const Piece& o) const { return error < o.error; }
  };
  std::priority_queue<Piece> heap;
  auto [v0, e0] = detail::gk15<T>(f, a, b);
  heap.push({a, b, v0, e0});
  T total = v0;
  double err = e0;
  int count = 1;
  while (err > std::max(abs_tol, rel_tol * std::abs(total)) && count < max_intervals) {
    Piece p = heap.top();
    heap.pop();
    const double m = 0.5 * (p.a + p.b);
    auto [vl, el] = detail::gk15<T>(f, p.a, m);
    auto [vr, er] = detail::gk15<T>(f, m, p.b);
    total += vl + vr - p.value;
    err += el + er - p.error;
    heap.push({p.a, m, vl, el});
    heap.push({m, p.b, vr, er});
    ++count;
  }
  // Re-sum to shed the accumulated cancellation in the running totals.
  T sum{};
  double esum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    esum += heap.top().error;
    heap.pop();
  }
  QuadratureResult<T> r;
  r.value = sum;
  r.error = esum;
  r.intervals = count;
  r.converged = esum <= std::max(abs_tol, rel_tol * std::abs(sum));
  return r;
}

}  // namespace dfeg
