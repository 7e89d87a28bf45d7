#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <algorithm>
#include <utility>
#include <stdexcept>
#include <vector>

#include "selfaction/errors.hpp"

namespace selfaction {

template <typename Real>
inline constexpr Real euler_gamma = std::numbers::egamma_v<Real>;

namespace detail {

// E_n(x) for integer n >= 1, x > 1: modified Lentz evaluation of the
// continued fraction for e^x E_n(x).
template <typename Real>
Real expint_continued_fraction(int n, Real x) {
  using std::abs;
  const Real eps = std::numeric_limits<Real>::epsilon();
  const Real tiny = std::numeric_limits<Real>::min() / eps;
  Real b = x + n;
  Real c = 1 / tiny;
  Real d = 1 / b;
  Real h = d;
  for (int i = 1; i < 100000; ++i) {
    const Real an = -static_cast<Real>(i) * static_cast<Real>(n - 1 + i);
    b += 2;
    d = 1 / (an * d + b);
    c = b + an / c;
    const Real del = c * d;
    h *= del;
    if (abs(del - 1) <= eps) return h * std::exp(-x);
  }
  throw NonConvergenceError("expint: continued fraction did not converge");
}

}  // namespace detail

/// E1(x) = ∫₁^∞ e^{−xt}/t dt for x > 0.
template <typename Real>
Real expint_e1(Real x) {
  using std::log;
  if (!(x > 0)) throw std::domain_error("expint_e1: x must be positive");
  if (x > 1) return detail::expint_continued_fraction<Real>(1, x);
  const Real eps = std::numeric_limits<Real>::epsilon();
  // −γ − ln x − Σ (−x)^k / (k k!)
  Real sum = 0;
  Real term = 1;
  for (int k = 1; k < 1000; ++k) {
    term *= -x / k;
    const Real add = term / k;
    sum += add;
    if (std::abs(add) <= eps * std::abs(sum)) break;
  }
  return -euler_gamma<Real> - log(x) - sum;
}

/// Generalized exponential integral E_n(x) = ∫₁^∞ e^{−xt} t^{−n} dt for any
/// integer n and x > 0.
template <typename Real>
Real expint_en(int n, Real x) {
  if (!(x > 0)) throw std::domain_error("expint_en: x must be positive");
  const Real ex = std::exp(-x);
  if (n <= 0) {
    // E_0 = e^{−x}/x, then E_{m−1} = (e^{−x} + (1−m) E_m)/x, all terms positive.
    Real e = ex / x;
    for (int m = 0; m > n; --m) e = (ex + static_cast<Real>(1 - m) * e) / x;
    return e;
  }
  if (n == 1) return expint_e1(x);
  if (x > 1) return detail::expint_continued_fraction<Real>(n, x);
  // upward recurrence n E_{n+1} = e^{−x} − x E_n is stable for x <= 1
  Real e = expint_e1(x);
  for (int m = 1; m < n; ++m) e = (ex - x * e) / static_cast<Real>(m);
  return e;
}

/// Derivatives Γ^{(m)}(1) for m = 0..max_order.
template <typename Real>
std::vector<Real> gamma_derivatives_at_one(int max_order) {
  // ψ^{(k)}(1): −γ for k = 0, (−1)^{k+1} k! ζ(k+1) otherwise
  std::vector<Real> psi(static_cast<std::size_t>(max_order) + 1);
  Real fact = 1;
  for (int k = 0; k <= max_order; ++k) {
    if (k == 0) {
      psi[0] = -euler_gamma<Real>;
    } else {
      fact *= k;
      const Real zeta = static_cast<Real>(std::riemann_zeta(static_cast<long double>(k + 1)));
      psi[static_cast<std::size_t>(k)] = (k % 2 == 1 ? 1 : -1) * fact * zeta;
    }
  }
  std::vector<Real> g(static_cast<std::size_t>(max_order) + 1);
  g[0] = 1;
  for (int m = 0; m < max_order; ++m) {
    // Γ^{(m+1)} = Σ_k C(m,k) Γ^{(m−k)} ψ^{(k)}
    Real acc = 0;
    Real binom = 1;
    for (int k = 0; k <= m; ++k) {
      acc += binom * g[static_cast<std::size_t>(m - k)] * psi[static_cast<std::size_t>(k)];
      binom = binom * static_cast<Real>(m - k) / static_cast<Real>(k + 1);
    }
    g[static_cast<std::size_t>(m + 1)] = acc;
  }
  return g;
}

/// Largest x accepted by log_weighted_expint for q >= 1. The reduction through
/// the lower incomplete integral cancels catastrophically beyond this.
template <typename Real>
inline constexpr Real log_weighted_expint_max_x = Real(4);

/// J(n, q; x) = ∫₁^∞ e^{−xt} t^{−n} (ln t)^q dt on a block of orders,
/// indexed [n − n_min][q].
template <typename Real>
class LogExpintTable {
 public:
  LogExpintTable(int n_min, int n_max, int q_max, std::vector<Real> values)
      : n_min_(n_min), n_max_(n_max), q_max_(q_max), values_(std::move(values)) {}

  Real operator()(int n, int q) const {
    if (n < n_min_ || n > n_max_ || q < 0 || q > q_max_) throw std::out_of_range("LogExpintTable: index out of range");
    return values_[static_cast<std::size_t>((n - n_min_) * (q_max_ + 1) + q)];
  }
  int n_min() const { return n_min_; }
  int n_max() const { return n_max_; }
  int q_max() const { return q_max_; }

 private:
  int n_min_;
  int n_max_;
  int q_max_;
  std::vector<Real> values_;
};

/// The q = 0 column is E_n(x). For q >= 1 the base case n = 1 is reduced to
/// Γ^{(m)}(1) and finite sums, then
///   (1−n) J(n,q) + q J(n,q−1) = −e^{−x} δ_{q0} + x J(n−1,q)
/// is run upward (n >= 2) or downward (n <= 0); both directions are stable
/// for x <= 4, beyond which q >= 1 is rejected with std::domain_error.
template <typename Real>
LogExpintTable<Real> log_weighted_expint_table(int n_min, int n_max, int q_max, Real x) {
  using std::log;
  if (q_max < 0) throw std::domain_error("log_weighted_expint: q must be non-negative");
  if (!(x > 0)) throw std::domain_error("log_weighted_expint: x must be positive");
  if (n_max < n_min) throw std::invalid_argument("log_weighted_expint: empty order range");
  if (q_max >= 1 && x > log_weighted_expint_max_x<Real>) {
    throw std::domain_error("log_weighted_expint: exact reduction limited to x <= 4 for q >= 1");
  }
  const int width = q_max + 1;
  const int lo = std::min(n_min, 1);
  const int hi = std::max(n_max, 1);
  std::vector<Real> all(static_cast<std::size_t>((hi - lo + 1) * width));
  auto at = [&](int n, int q) -> Real& { return all[static_cast<std::size_t>((n - lo) * width + q)]; };

  for (int n = lo; n <= hi; ++n) at(n, 0) = expint_en<Real>(n, x);

  if (q_max >= 1) {
    const Real ex = std::exp(-x);
    const Real lx = log(x);
    constexpr int cached_orders = 16;
    static const std::vector<Real> gd_cache = gamma_derivatives_at_one<Real>(cached_orders);
    const std::vector<Real> gd = q_max + 1 <= cached_orders ? gd_cache : gamma_derivatives_at_one<Real>(q_max + 1);

    // P_m = ∫₀^x e^{−u} (ln u)^m du by the power series of e^{−u}
    auto lower_log_integral = [&](int m) {
      const Real eps = std::numeric_limits<Real>::epsilon();
      Real total = 0;
      Real xpow = x;  // x^{j+1}
      Real inv_fact = 1;
      for (int j = 0; j < 2000; ++j) {
        const Real jp1 = static_cast<Real>(j + 1);
        // ∫₀^x u^j (ln u)^m du = x^{j+1} Σ_i (−1)^i m!/(m−i)! (ln x)^{m−i} / (j+1)^{i+1}
        Real inner = 0;
        Real falling = 1;
        Real denom = jp1;
        for (int i = 0; i <= m; ++i) {
          inner += (i % 2 == 0 ? 1 : -1) * falling * std::pow(lx, m - i) / denom;
          falling *= static_cast<Real>(m - i);
          denom *= jp1;
        }
        const Real term = (j % 2 == 0 ? 1 : -1) * inv_fact * xpow * inner;
        total += term;
        if (j > x + 2 && std::abs(term) <= eps * std::abs(total)) break;
        xpow *= x;
        inv_fact /= jp1;
      }
      return total;
    };

    // K_k = ∫₁^∞ e^{−xt} (ln(xt))^k / t dt
    std::vector<Real> K(static_cast<std::size_t>(width));
    K[0] = at(1, 0);
    for (int k = 1; k <= q_max; ++k) {
      const Real t = gd[static_cast<std::size_t>(k + 1)] - lower_log_integral(k + 1);
      K[static_cast<std::size_t>(k)] = (-ex * std::pow(lx, k + 1) + t) / static_cast<Real>(k + 1);
    }
    // J(1, j) = Σ_k C(j,k) (−ln x)^{j−k} K_k
    for (int j = 1; j <= q_max; ++j) {
      Real acc = 0;
      Real binom = 1;
      for (int k = 0; k <= j; ++k) {
        acc += binom * std::pow(-lx, j - k) * K[static_cast<std::size_t>(k)];
        binom = binom * static_cast<Real>(j - k) / static_cast<Real>(k + 1);
      }
      at(1, j) = acc;
    }
    for (int m = 2; m <= hi; ++m) {
      for (int j = 1; j <= q_max; ++j) {
        at(m, j) = (-x * at(m - 1, j) + j * at(m, j - 1)) / static_cast<Real>(m - 1);
      }
    }
    for (int m = 1; m > lo; --m) {
      for (int j = 1; j <= q_max; ++j) {
        at(m - 1, j) = (static_cast<Real>(1 - m) * at(m, j) + j * at(m, j - 1)) / x;
      }
    }
  }

  std::vector<Real> values;
  values.reserve(static_cast<std::size_t>((n_max - n_min + 1) * width));
  for (int n = n_min; n <= n_max; ++n) {
    for (int q = 0; q <= q_max; ++q) values.push_back(at(n, q));
  }
  return LogExpintTable<Real>(n_min, n_max, q_max, std::move(values));
}

/// Single entry of log_weighted_expint_table.
template <typename Real>
Real log_weighted_expint(int n, int q, Real x) {
  if (q < 0) throw std::domain_error("log_weighted_expint: q must be non-negative");
  if (q == 0) {
    if (!(x > 0)) throw std::domain_error("log_weighted_expint: x must be positive");
    return expint_en<Real>(n, x);
  }
  return log_weighted_expint_table<Real>(n, n, q, x)(n, q);
}

}  // namespace selfaction
