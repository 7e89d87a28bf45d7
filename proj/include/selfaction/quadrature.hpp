#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <span>
#include <utility>
#include <vector>

#include "selfaction/errors.hpp"
#include "selfaction/summation.hpp"

namespace selfaction {

template <typename Real>
struct QuadratureResult {
  Real value = 0;
  Real error_estimate = 0;
  int intervals = 0;
  int evaluations = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule, nodes on [0, 1).
template <typename Real>
struct Gk15 {
  static constexpr std::array<long double, 8> xk = {
      0.991455371120812639206854697526329L, 0.949107912342758524526189684047851L,
      0.864864423359769072789712788640926L, 0.741531185599394439863864773280788L,
      0.586087235467691130294144845693013L, 0.405845151377397166906606412076961L,
      0.207784955007898467600689403773245L, 0.000000000000000000000000000000000L};
  static constexpr std::array<long double, 8> wk = {
      0.022935322010529224963732008058970L, 0.063092092629978553290700663189204L,
      0.104790010322250183839876322541518L, 0.140653259715525918745189590510238L,
      0.169004726639267902826583426598550L, 0.190350578064785409913256402421014L,
      0.204432940075298892414161999234649L, 0.209482141084727828012999174891714L};
  static constexpr std::array<long double, 4> wg = {
      0.129484966168869693270611432679082L, 0.279705391489276667901467771423780L,
      0.381830050505118944950369775488975L, 0.417959183673469387755102040816327L};
};

template <typename Real>
struct Panel {
  Real a;
  Real b;
  Real value;
  Real error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <typename Real, typename F>
Panel<Real> gk15_panel(F& f, Real a, Real b) {
  using std::abs;
  const Real c = (a + b) / 2;
  const Real h = (b - a) / 2;
  const Real fc = f(c);
  Real kron = fc * static_cast<Real>(Gk15<Real>::wk[7]);
  Real gauss = fc * static_cast<Real>(Gk15<Real>::wg[3]);
  for (int j = 0; j < 7; ++j) {
    const Real dx = h * static_cast<Real>(Gk15<Real>::xk[static_cast<std::size_t>(j)]);
    const Real sum = f(c - dx) + f(c + dx);
    kron += static_cast<Real>(Gk15<Real>::wk[static_cast<std::size_t>(j)]) * sum;
    if (j % 2 == 1) gauss += static_cast<Real>(Gk15<Real>::wg[static_cast<std::size_t>(j / 2)]) * sum;
  }
  return {a, b, kron * h, abs((kron - gauss) * h)};
}

}  // namespace detail

/// Globally adaptive G7K15 over [breakpoints.front(), breakpoints.back()],
/// starting from one panel per breakpoint interval and always bisecting the
/// panel with the largest error estimate. Stops when the summed estimate is
/// below max(abs_tol, rel_tol·|value|).
template <typename Real, typename F>
QuadratureResult<Real> integrate_adaptive(F&& f, std::span<const Real> breakpoints, Real rel_tol, Real abs_tol,
                                          int max_intervals = 5000) {
  using std::abs;
  std::priority_queue<detail::Panel<Real>> queue;
  QuadratureResult<Real> out;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    queue.push(detail::gk15_panel<Real>(f, breakpoints[i], breakpoints[i + 1]));
    out.evaluations += 15;
  }

  auto totals = [&queue]() {
    // order-independent of heap layout: sort panels by position first
    std::vector<detail::Panel<Real>> panels;
    auto copy = queue;
    while (!copy.empty()) {
      panels.push_back(copy.top());
      copy.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
    CompensatedSum<Real> value;
    CompensatedSum<Real> error;
    for (const auto& p : panels) {
      value += p.value;
      error += p.error;
    }
    return std::pair{value.value(), error.value()};
  };

  // running sums for the stopping test, exact totals recomputed at the end
  Real value = 0;
  Real error = 0;
  {
    auto [v, e] = totals();
    value = v;
    error = e;
  }
  while (error > std::max(abs_tol, rel_tol * abs(value))) {
    if (static_cast<int>(queue.size()) >= max_intervals) {
      throw NonConvergenceError("integrate_adaptive: subdivision limit reached");
    }
    const detail::Panel<Real> worst = queue.top();
    queue.pop();
    const Real mid = (worst.a + worst.b) / 2;
    const auto left = detail::gk15_panel<Real>(f, worst.a, mid);
    const auto right = detail::gk15_panel<Real>(f, mid, worst.b);
    out.evaluations += 30;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    if (static_cast<int>(queue.size()) % 64 == 0) {
      auto [v, e] = totals();
      value = v;
      error = e;
    }
  }
  auto [v, e] = totals();
  out.value = v;
  out.error_estimate = e;
  out.intervals = static_cast<int>(queue.size());
  return out;
}

template <typename Real, typename F>
QuadratureResult<Real> integrate_adaptive(F&& f, Real a, Real b, Real rel_tol, Real abs_tol,
                                          int max_intervals = 5000) {
  const std::array<Real, 2> bp{a, b};
  return integrate_adaptive<Real>(std::forward<F>(f), std::span<const Real>(bp), rel_tol, abs_tol, max_intervals);
}

}  // namespace selfaction
