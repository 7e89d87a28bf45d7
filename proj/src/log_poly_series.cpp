#include "selfaction/log_poly_series.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

namespace selfaction {

LogPolySeries LogPolySeries::constant(const Rational& c) { return monomial(c, 0, 0, 0); }

LogPolySeries LogPolySeries::monomial(const Rational& c, int alpha_pow, int s_pow, int log_pow) {
  if (alpha_pow < 0 || log_pow < 0) {
    throw std::invalid_argument("monomial: alpha and log exponents must be non-negative");
  }
  LogPolySeries out;
  out.accumulate({alpha_pow, s_pow, log_pow}, c);
  return out;
}

LogPolySeries LogPolySeries::from_terms(const std::vector<Term>& terms) {
  LogPolySeries out;
  for (const auto& t : terms) {
    if (t.alpha_pow < 0 || t.log_pow < 0) {
      throw std::invalid_argument("from_terms: alpha and log exponents must be non-negative");
    }
    out.accumulate(t.key(), t.coeff);
  }
  return out;
}

void LogPolySeries::accumulate(const TermKey& key, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

std::vector<Term> LogPolySeries::terms() const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& [k, c] : terms_) out.push_back({c, k.alpha_pow, k.s_pow, k.log_pow});
  return out;
}

Rational LogPolySeries::coefficient(int alpha_pow, int s_pow, int log_pow) const {
  auto it = terms_.find({alpha_pow, s_pow, log_pow});
  return it == terms_.end() ? Rational(0) : it->second;
}

int LogPolySeries::min_alpha_pow() const {
  if (terms_.empty()) return std::numeric_limits<int>::max();
  return terms_.begin()->first.alpha_pow;
}

int LogPolySeries::max_alpha_pow() const {
  if (terms_.empty()) return -1;
  return terms_.rbegin()->first.alpha_pow;
}

int LogPolySeries::max_log_pow() const {
  int q = 0;
  for (const auto& [k, c] : terms_) q = std::max(q, k.log_pow);
  return q;
}

LogPolySeries LogPolySeries::alpha_part(int alpha_pow) const {
  LogPolySeries out;
  for (const auto& [k, c] : terms_) {
    if (k.alpha_pow == alpha_pow) out.terms_.emplace(k, c);
  }
  return out;
}

LogPolySeries LogPolySeries::truncate_alpha(int max_alpha_pow) const {
  LogPolySeries out;
  for (const auto& [k, c] : terms_) {
    if (k.alpha_pow <= max_alpha_pow) out.terms_.emplace(k, c);
  }
  return out;
}

LogPolySeries LogPolySeries::shift_alpha(int k) const {
  LogPolySeries out;
  for (const auto& [key, c] : terms_) {
    if (key.alpha_pow + k < 0) {
      throw std::domain_error("shift_alpha: negative alpha exponent");
    }
    out.terms_.emplace(TermKey{key.alpha_pow + k, key.s_pow, key.log_pow}, c);
  }
  return out;
}

LogPolySeries LogPolySeries::shift_s(int k) const {
  LogPolySeries out;
  for (const auto& [key, c] : terms_) {
    out.terms_.emplace(TermKey{key.alpha_pow, key.s_pow + k, key.log_pow}, c);
  }
  return out;
}

LogPolySeries LogPolySeries::operator-() const {
  LogPolySeries out = *this;
  for (auto& [k, c] : out.terms_) c = -c;
  return out;
}

LogPolySeries& LogPolySeries::operator+=(const LogPolySeries& rhs) {
  for (const auto& [k, c] : rhs.terms_) accumulate(k, c);
  return *this;
}

LogPolySeries& LogPolySeries::operator-=(const LogPolySeries& rhs) {
  for (const auto& [k, c] : rhs.terms_) accumulate(k, -c);
  return *this;
}

LogPolySeries& LogPolySeries::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, v] : terms_) v *= c;
  return *this;
}

LogPolySeries operator+(LogPolySeries a, const LogPolySeries& b) { return a += b; }
LogPolySeries operator-(LogPolySeries a, const LogPolySeries& b) { return a -= b; }
LogPolySeries operator*(LogPolySeries a, const Rational& c) { return a *= c; }
LogPolySeries operator*(const Rational& c, LogPolySeries a) { return a *= c; }

LogPolySeries operator*(const LogPolySeries& a, const LogPolySeries& b) {
  std::vector<Term> out;
  out.reserve(a.size() * b.size());
  for (const auto& [ka, ca] : a.storage()) {
    for (const auto& [kb, cb] : b.storage()) {
      out.push_back({ca * cb, ka.alpha_pow + kb.alpha_pow, ka.s_pow + kb.s_pow,
                     ka.log_pow + kb.log_pow});
    }
  }
  return LogPolySeries::from_terms(out);
}

LogPolySeries differentiate(const LogPolySeries& series) {
  std::vector<Term> out;
  for (const auto& [k, c] : series.storage()) {
    // d/ds[c s^p L^q] = c p s^{p-1} L^q + c q s^{p-1} L^{q-1}
    if (k.s_pow != 0) out.push_back({c * k.s_pow, k.alpha_pow, k.s_pow - 1, k.log_pow});
    if (k.log_pow != 0) out.push_back({c * k.log_pow, k.alpha_pow, k.s_pow - 1, k.log_pow - 1});
  }
  return LogPolySeries::from_terms(out);
}

namespace {

// Appends c * integral(s^p (ln s)^q ds) to out.
void integrate_monomial(const Rational& c, int alpha_pow, int p, int q, std::vector<Term>& out) {
  if (p == -1) {
    out.push_back({c / (q + 1), alpha_pow, 0, q + 1});
    return;
  }
  // Integration by parts, unrolled:
  //   I(p,q) = s^{p+1} L^q/(p+1) - q/(p+1) I(p,q-1)
  Rational factor = c;
  const Rational inv = make_rational(1, p + 1);
  for (int j = q; j >= 0; --j) {
    out.push_back({factor * inv, alpha_pow, p + 1, j});
    factor *= -inv * j;
  }
}

}  // namespace

LogPolySeries antiderivative(const LogPolySeries& series) {
  std::vector<Term> out;
  for (const auto& [k, c] : series.storage()) integrate_monomial(c, k.alpha_pow, k.s_pow, k.log_pow, out);
  return LogPolySeries::from_terms(out);
}

LogPolySeries eval_at_one(const LogPolySeries& series) {
  std::vector<Term> out;
  for (const auto& [k, c] : series.storage()) {
    if (k.log_pow == 0) out.push_back({c, k.alpha_pow, 0, 0});
  }
  return LogPolySeries::from_terms(out);
}

namespace {

nlohmann::json big_int_json(const mpz_class& z) {
  if (z.fits_slong_p()) return static_cast<std::int64_t>(z.get_si());
  return z.get_str();
}

mpz_class big_int_from_json(const nlohmann::json& j) {
  if (j.is_string()) return mpz_class(j.get<std::string>());
  return mpz_class(std::to_string(j.get<std::int64_t>()));
}

}  // namespace

nlohmann::json to_json(const LogPolySeries& series) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [k, c] : series.storage()) {
    arr.push_back({{"num", big_int_json(c.get_num())},
                   {"den", big_int_json(c.get_den())},
                   {"alpha_pow", k.alpha_pow},
                   {"s_pow", k.s_pow},
                   {"log_pow", k.log_pow}});
  }
  return arr;
}

LogPolySeries series_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("series JSON must be an array");
  std::vector<Term> terms;
  for (const auto& item : j) {
    mpz_class num = big_int_from_json(item.at("num"));
    mpz_class den = big_int_from_json(item.at("den"));
    if (den == 0) throw std::invalid_argument("series JSON: zero denominator");
    Rational c(num, den);
    c.canonicalize();
    terms.push_back({c, item.at("alpha_pow").get<int>(), item.at("s_pow").get<int>(),
                     item.at("log_pow").get<int>()});
  }
  return LogPolySeries::from_terms(terms);
}

namespace {

std::string superscript(int n) {
  static const char* const digits[] = {"⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"};
  std::string out = n < 0 ? "⁻" : "";
  for (char ch : std::to_string(n < 0 ? -n : n)) out += digits[ch - '0'];
  return out;
}

std::string power_suffix(int n) { return n == 1 ? "" : superscript(n); }

std::string monomial_body(int p, int q) {
  std::string body;
  if (p != 0) body = "s" + power_suffix(p);
  if (q != 0) {
    if (!body.empty()) body += " ";
    body += q == 1 ? "ln s" : "(ln s)" + superscript(q);
  }
  return body;
}

std::string magnitude_text(const Rational& abs_c, bool has_body) {
  if (abs_c == 1 && has_body) return "";
  if (abs_c.get_den() == 1) return abs_c.get_num().get_str();
  return "(" + abs_c.get_num().get_str() + "/" + abs_c.get_den().get_str() + ")";
}

std::string group_text(const LogPolySeries& group, int alpha_pow, bool first_group) {
  // Common factor: gcd of numerators over lcm of denominators, signed like the
  // leading term.
  mpz_class g = 0;
  mpz_class l = 1;
  for (const auto& [k, c] : group.storage()) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num().get_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
  }
  Rational factor(g, l);
  factor.canonicalize();
  if (group.storage().begin()->second < 0) factor = -factor;

  std::string inner;
  bool first = true;
  for (const auto& [k, c] : group.storage()) {
    const Rational scaled = c / factor;
    const std::string body = monomial_body(k.s_pow, k.log_pow);
    std::string mag = magnitude_text(abs(scaled), !body.empty());
    // integers glue to the monomial ("2s"), fractions do not ("(31/15) s⁻²")
    if (!body.empty() && !mag.empty() && (mag.front() == '(' || body.front() == 'l')) mag += " ";
    if (first) {
      inner += (scaled < 0 ? "−" : "") + mag + body;
      first = false;
    } else {
      inner += (scaled < 0 ? " − " : " + ") + mag + body;
    }
  }

  const Rational abs_factor = abs(factor);
  std::string alpha = alpha_pow == 0 ? "" : "α" + power_suffix(alpha_pow);
  std::string prefix;
  if (alpha.empty() && abs_factor == 1) {
    prefix = "";
  } else {
    std::string num = abs_factor.get_num() == 1 && !alpha.empty() ? "" : abs_factor.get_num().get_str();
    prefix = "(" + num + alpha;
    if (abs_factor.get_den() != 1) prefix += "/" + abs_factor.get_den().get_str();
    prefix += ")";
  }
  std::string sign;
  if (factor < 0) {
    sign = first_group ? "−" : " − ";
  } else if (!first_group) {
    sign = " + ";
  }
  if (group.size() == 1) {
    const bool bare_constant = group.storage().begin()->first == TermKey{alpha_pow, 0, 0};
    return sign + prefix + (bare_constant && !prefix.empty() ? "" : inner);
  }
  return sign + prefix + "(" + inner + ")";
}

}  // namespace

std::string to_text(const LogPolySeries& series) {
  if (series.empty()) return "0";
  std::string out;
  bool first = true;
  int current = -1;
  for (const auto& [k, c] : series.storage()) {
    if (k.alpha_pow == current) continue;
    current = k.alpha_pow;
    out += group_text(series.alpha_part(current), current, first);
    first = false;
  }
  return out;
}

}  // namespace selfaction
