#pragma once

// Exact log-polynomial series in s with rational coefficients and a tracked
// power of alpha:
//
//   S(s; alpha) = sum_k  c_k * alpha^{a_k} * s^{p_k} * (ln s)^{q_k}
//
// c_k is an arbitrary-precision rational, a_k >= 0, p_k any integer and
// q_k >= 0. The set is closed under +, *, d/ds and antidifferentiation, which
// is all the radial iteration needs.

#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <nlohmann/json.hpp>

#include "selfaction/summation.hpp"

namespace selfaction {

using Rational = mpq_class;

/// num/den in canonical form (GMP requires it for arithmetic).
inline Rational make_rational(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Exponent triple of a monomial; ordering is the normalization key.
struct TermKey {
  int alpha_pow = 0;
  int s_pow = 0;
  int log_pow = 0;

  auto operator<=>(const TermKey&) const = default;
};

struct Term {
  Rational coeff;
  int alpha_pow = 0;
  int s_pow = 0;
  int log_pow = 0;

  TermKey key() const { return {alpha_pow, s_pow, log_pow}; }
};

class LogPolySeries {
 public:
  using Storage = std::map<TermKey, Rational>;

  LogPolySeries() = default;

  static LogPolySeries constant(const Rational& c);
  static LogPolySeries monomial(const Rational& c, int alpha_pow, int s_pow, int log_pow = 0);
  /// Builds a series from an unnormalized term list; repeated keys are summed.
  static LogPolySeries from_terms(const std::vector<Term>& terms);

  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const Storage& storage() const { return terms_; }
  /// Terms in normalization-key order.
  std::vector<Term> terms() const;

  /// Coefficient of one monomial (zero when absent).
  Rational coefficient(int alpha_pow, int s_pow, int log_pow = 0) const;

  int min_alpha_pow() const;
  int max_alpha_pow() const;
  int max_log_pow() const;
  /// Exact sub-series of the terms carrying alpha^alpha_pow.
  LogPolySeries alpha_part(int alpha_pow) const;
  /// Drops every term with alpha exponent above max_alpha_pow.
  LogPolySeries truncate_alpha(int max_alpha_pow) const;
  /// Multiplies by alpha^k (k may be negative if every exponent stays >= 0).
  LogPolySeries shift_alpha(int k) const;
  /// Multiplies by s^k.
  LogPolySeries shift_s(int k) const;

  LogPolySeries operator-() const;
  LogPolySeries& operator+=(const LogPolySeries& rhs);
  LogPolySeries& operator-=(const LogPolySeries& rhs);
  LogPolySeries& operator*=(const Rational& c);

  friend bool operator==(const LogPolySeries&, const LogPolySeries&) = default;

 private:
  void accumulate(const TermKey& key, const Rational& c);

  Storage terms_;
};

LogPolySeries operator+(LogPolySeries a, const LogPolySeries& b);
LogPolySeries operator-(LogPolySeries a, const LogPolySeries& b);
LogPolySeries operator*(const LogPolySeries& a, const LogPolySeries& b);
LogPolySeries operator*(LogPolySeries a, const Rational& c);
LogPolySeries operator*(const Rational& c, LogPolySeries a);

inline LogPolySeries series_add(const LogPolySeries& a, const LogPolySeries& b) { return a + b; }
inline LogPolySeries series_mul(const LogPolySeries& a, const LogPolySeries& b) { return a * b; }

/// d/ds, term by term.
LogPolySeries differentiate(const LogPolySeries& series);

/// Antiderivative in s without an integration constant.
LogPolySeries antiderivative(const LogPolySeries& series);

/// Sets s = 1: only log-free terms survive and every s power collapses.
/// The result depends on alpha alone (all s_pow and log_pow are zero).
LogPolySeries eval_at_one(const LogPolySeries& series);

namespace detail {

template <typename Real>
Real to_real(const Rational& q) {
  const mpz_class& num = q.get_num();
  const mpz_class& den = q.get_den();
  if (num.fits_slong_p() && den.fits_slong_p()) {
    return static_cast<Real>(num.get_si()) / static_cast<Real>(den.get_si());
  }
  return static_cast<Real>(q.get_d());
}

template <typename Real>
Real int_pow(Real x, int n) {
  Real result = 1;
  Real base = n < 0 ? Real(1) / x : x;
  unsigned e = n < 0 ? static_cast<unsigned>(-n) : static_cast<unsigned>(n);
  while (e != 0U) {
    if (e & 1U) result *= base;
    base *= base;
    e >>= 1U;
  }
  return result;
}

}  // namespace detail

/// Floating evaluation at (s, alpha) with compensated summation in key order.
template <typename Real>
Real eval_numeric(const LogPolySeries& series, Real s, Real alpha) {
  if (!(s > Real(0))) {
    throw std::domain_error("eval_numeric: s must be positive");
  }
  using std::log;
  const Real ln_s = log(s);
  CompensatedSum<Real> sum;
  for (const auto& [key, c] : series.storage()) {
    sum += detail::to_real<Real>(c) * detail::int_pow(alpha, key.alpha_pow) *
           detail::int_pow(s, key.s_pow) * detail::int_pow(ln_s, key.log_pow);
  }
  return sum.value();
}

/// JSON array of {num, den, alpha_pow, s_pow, log_pow} in key order.
nlohmann::json to_json(const LogPolySeries& series);
LogPolySeries series_from_json(const nlohmann::json& j);

/// Text form in the usual notation, grouped by alpha power with the common
/// rational factor pulled out, e.g. "(α/6)(s⁻² − 3 + 2s)".
std::string to_text(const LogPolySeries& series);

}  // namespace selfaction
