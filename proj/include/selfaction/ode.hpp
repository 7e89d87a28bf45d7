#pragma once

// Dormand–Prince 5(4) with per-component mixed error control. Steps are
// clipped so that every requested output point is hit exactly.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>

#include "selfaction/errors.hpp"

namespace selfaction {

template <typename Real>
struct OdeOptions {
  Real rel_tol = Real(1e-14);
  Real abs_tol = Real(1e-30);
  /// First trial step as a fraction of the total span.
  Real initial_step_fraction = Real(1e-3);
  /// Smallest admissible |h| relative to max(|t|, 1).
  Real min_step_ratio = Real(64) * std::numeric_limits<Real>::epsilon();
  long max_steps = 1000000;
};

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
};

namespace detail {

template <typename Real>
struct DormandPrince {
  static constexpr Real c2 = Real(1) / 5, c3 = Real(3) / 10, c4 = Real(4) / 5, c5 = Real(8) / 9;
  static constexpr Real a21 = Real(1) / 5;
  static constexpr Real a31 = Real(3) / 40, a32 = Real(9) / 40;
  static constexpr Real a41 = Real(44) / 45, a42 = Real(-56) / 15, a43 = Real(32) / 9;
  static constexpr Real a51 = Real(19372) / 6561, a52 = Real(-25360) / 2187, a53 = Real(64448) / 6561,
                        a54 = Real(-212) / 729;
  static constexpr Real a61 = Real(9017) / 3168, a62 = Real(-355) / 33, a63 = Real(46732) / 5247,
                        a64 = Real(49) / 176, a65 = Real(-5103) / 18656;
  static constexpr Real b1 = Real(35) / 384, b3 = Real(500) / 1113, b4 = Real(125) / 192, b5 = Real(-2187) / 6784,
                        b6 = Real(11) / 84;
  // fifth minus embedded fourth order weights
  static constexpr Real e1 = Real(71) / 57600, e3 = Real(-71) / 16695, e4 = Real(71) / 1920,
                        e5 = Real(-17253) / 339200, e6 = Real(22) / 525, e7 = Real(-1) / 40;
};

}  // namespace detail

/// Integrates y' = rhs(t, y) from t0 through the monotone list `outputs`
/// (all on one side of t0). `on_step(t, y)` sees every accepted step and
/// every output point. Throws NonConvergenceError when the step underflows.
template <typename Real, std::size_t N, typename Rhs, typename OnStep>
OdeStats integrate_dormand_prince(Rhs&& rhs, Real t0, std::array<Real, N> y, std::span<const Real> outputs,
                                  OnStep&& on_step, const OdeOptions<Real>& opt = {}) {
  using State = std::array<Real, N>;
  using T = detail::DormandPrince<Real>;
  OdeStats stats;
  if (outputs.empty()) return stats;
  const Real t_end = outputs.back();
  const Real dir = t_end < t0 ? Real(-1) : Real(1);
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    const Real prev = i == 0 ? t0 : outputs[i - 1];
    if ((outputs[i] - prev) * dir < 0) throw std::invalid_argument("integrate_dormand_prince: outputs not monotone");
  }

  auto axpy = [](const State& base, std::initializer_list<std::pair<Real, const State*>> parts, Real h) {
    State out = base;
    for (std::size_t j = 0; j < N; ++j) {
      Real acc = 0;
      for (const auto& [w, k] : parts) acc += w * (*k)[j];
      out[j] += h * acc;
    }
    return out;
  };

  Real t = t0;
  Real h = dir * std::abs(t_end - t0) * opt.initial_step_fraction;
  State k1 = rhs(t, y);
  std::size_t next = 0;
  while (next < outputs.size() && outputs[next] == t) {
    on_step(t, y);
    ++next;
  }
  while (next < outputs.size()) {
    if (stats.accepted + stats.rejected >= opt.max_steps) {
      throw NonConvergenceError("integrate_dormand_prince: step budget exhausted");
    }
    const Real target = outputs[next];
    const Real proposed = h;
    bool hits = false;
    if ((t + h - target) * dir >= 0) {
      h = target - t;
      hits = true;
    }
    if (std::abs(h) < opt.min_step_ratio * std::max(std::abs(t), Real(1))) {
      throw NonConvergenceError("integrate_dormand_prince: step size underflow");
    }
    const State k2 = rhs(t + T::c2 * h, axpy(y, {{T::a21, &k1}}, h));
    const State k3 = rhs(t + T::c3 * h, axpy(y, {{T::a31, &k1}, {T::a32, &k2}}, h));
    const State k4 = rhs(t + T::c4 * h, axpy(y, {{T::a41, &k1}, {T::a42, &k2}, {T::a43, &k3}}, h));
    const State k5 = rhs(t + T::c5 * h, axpy(y, {{T::a51, &k1}, {T::a52, &k2}, {T::a53, &k3}, {T::a54, &k4}}, h));
    const State k6 =
        rhs(t + h, axpy(y, {{T::a61, &k1}, {T::a62, &k2}, {T::a63, &k3}, {T::a64, &k4}, {T::a65, &k5}}, h));
    const State y_new = axpy(y, {{T::b1, &k1}, {T::b3, &k3}, {T::b4, &k4}, {T::b5, &k5}, {T::b6, &k6}}, h);
    const State k7 = rhs(t + h, y_new);

    Real err = 0;
    for (std::size_t j = 0; j < N; ++j) {
      const Real e = h * (T::e1 * k1[j] + T::e3 * k3[j] + T::e4 * k4[j] + T::e5 * k5[j] + T::e6 * k6[j] +
                          T::e7 * k7[j]);
      const Real scale = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[j]), std::abs(y_new[j]));
      err = std::max(err, std::abs(e) / scale);
    }
    if (!std::isfinite(err)) throw NonConvergenceError("integrate_dormand_prince: non-finite error estimate");

    const Real factor =
        err == 0 ? Real(5) : std::clamp(Real(0.9) * std::pow(err, Real(-0.2)), Real(0.2), Real(5));
    if (err <= 1) {
      ++stats.accepted;
      t = hits ? target : t + h;
      y = y_new;
      k1 = k7;
      on_step(t, y);
      if (hits) ++next;
      while (next < outputs.size() && outputs[next] == t) ++next;
      // a step clipped to an output point keeps the unclipped proposal
      h = hits ? proposed : h * factor;
    } else {
      ++stats.rejected;
      h *= std::min(factor, Real(1));
    }
  }
  return stats;
}

}  // namespace selfaction
