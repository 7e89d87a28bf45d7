#include "selfaction/reference_iterates.hpp"

#include <sstream>

namespace selfaction {

namespace {

struct Mono {
  long num;
  long den;
  int s_pow;
  int log_pow;
};

// prefactor * alpha^alpha_pow * sum(monos)
LogPolySeries bracket(const Rational& prefactor, int alpha_pow, std::initializer_list<Mono> monos) {
  std::vector<Term> terms;
  for (const auto& m : monos) {
    terms.push_back({prefactor * make_rational(m.num, m.den), alpha_pow, m.s_pow, m.log_pow});
  }
  return LogPolySeries::from_terms(terms);
}

const Rational kTwelfth = make_rational(1, 12);

}  // namespace

std::vector<ReferenceIterate> reference_iterates() {
  return {
      {"F0", "(α/6)(s⁻² − 3 + 2s)",
       bracket(make_rational(1, 6), 1, {{1, 1, -2, 0}, {-3, 1, 0, 0}, {2, 1, 1, 0}})},
      {"G1", "−(α²/12)(s⁻² − 2s⁻¹ + 6 ln s + 9 − 10s + 2s²)",
       bracket(-kTwelfth, 2,
               {{1, 1, -2, 0}, {-2, 1, -1, 0}, {6, 1, 0, 1}, {9, 1, 0, 0}, {-10, 1, 1, 0}, {2, 1, 2, 0}})},
      {"F1",
       "(α³/12)[(31/15)s⁻² + s⁻² ln s − 3s⁻¹ + 3 ln s + 4 − (17/3)s − 2s ln s + 3s² − (2/5)s³]",
       bracket(kTwelfth, 3,
               {{31, 15, -2, 0},
                {1, 1, -2, 1},
                {-3, 1, -1, 0},
                {3, 1, 0, 1},
                {4, 1, 0, 0},
                {-17, 3, 1, 0},
                {-2, 1, 1, 1},
                {3, 1, 2, 0},
                {-2, 5, 3, 0}})},
      {"G2",
       "(α⁴/12)[−(77/60)s⁻² − (1/2)s⁻² ln s + (91/15)s⁻¹ + s⁻¹ ln s − (14/3)s − 5s ln s − 35/12 + "
       "7 ln s + (23/6)s² + s² ln s − (17/15)s³ + (1/10)s⁴ + (3/2)(ln s)²]",
       bracket(kTwelfth, 4,
               {{-77, 60, -2, 0},
                {-1, 2, -2, 1},
                {91, 15, -1, 0},
                {1, 1, -1, 1},
                {-14, 3, 1, 0},
                {-5, 1, 1, 1},
                {-35, 12, 0, 0},
                {7, 1, 0, 1},
                {23, 6, 2, 0},
                {1, 1, 2, 1},
                {-17, 15, 3, 0},
                {1, 10, 4, 0},
                {3, 2, 0, 2}})},
      {"g0", "−(α/2)(1 − s)² s⁻²",
       bracket(make_rational(-1, 2), 1, {{1, 1, -2, 0}, {-2, 1, -1, 0}, {1, 1, 0, 0}})},
      {"f1", "(α²/12)(11s⁻² + 6s⁻² ln s − 18s⁻¹ + 9 − 2s)",
       bracket(kTwelfth, 2, {{11, 1, -2, 0}, {6, 1, -2, 1}, {-18, 1, -1, 0}, {9, 1, 0, 0}, {-2, 1, 1, 0}})},
      {"g1", "(α³/12)(−7s⁻² − 3s⁻² ln s + 35s⁻¹ + 6s⁻¹ ln s − 18 + 27 ln s − 11s + s²)",
       bracket(kTwelfth, 3,
               {{-7, 1, -2, 0},
                {-3, 1, -2, 1},
                {35, 1, -1, 0},
                {6, 1, -1, 1},
                {-18, 1, 0, 0},
                {27, 1, 0, 1},
                {-11, 1, 1, 0},
                {1, 1, 2, 0}})},
  };
}

std::vector<ReferenceIterate> reference_products() {
  return {
      {"GG[α⁰]", "(2/α)s²G̃g̃ leading: −(1 − s)²",
       bracket(-1, 0, {{1, 1, 0, 0}, {-2, 1, 1, 0}, {1, 1, 2, 0}})},
      {"GG[α²]", "(2/α)s²G̃g̃: (α²/12)[s⁻² − 4s⁻¹ + 40s − 5s² + 60s² ln s − 36s³ + 4s⁴]",
       bracket(kTwelfth, 2,
               {{1, 1, -2, 0},
                {-4, 1, -1, 0},
                {40, 1, 1, 0},
                {-5, 1, 2, 0},
                {60, 1, 2, 1},
                {-36, 1, 3, 0},
                {4, 1, 4, 0}})},
      {"GG[α⁴]", "(2/α)s²G̃g̃: (α⁴/12)[(147/60)s⁻² + s⁻² ln s + …]",
       bracket(kTwelfth, 4, {{147, 60, -2, 0}, {1, 1, -2, 1}}), true},
      {"FF[α⁰]", "(6/α)s²F̃f̃ leading: s⁻² − 3 + 2s",
       bracket(1, 0, {{1, 1, -2, 0}, {-3, 1, 0, 0}, {2, 1, 1, 0}})},
      {"FF[α²]",
       "(6/α)s²F̃f̃: (α²/12)[(351/15)s⁻² + 12s⁻² ln s − 36s⁻¹ + 40s − 45s² + (108/5)s³ − 4s⁴]",
       bracket(kTwelfth, 2,
               {{351, 15, -2, 0},
                {12, 1, -2, 1},
                {-36, 1, -1, 0},
                {40, 1, 1, 0},
                {-45, 1, 2, 0},
                {108, 5, 3, 0},
                {-4, 1, 4, 0}})},
  };
}

CoefficientCheck compare_coefficients(const ReferenceIterate& ref, const LogPolySeries& computed) {
  CoefficientCheck out;
  out.label = ref.label;
  out.description = ref.description;
  out.partial = ref.partial;
  out.computed = computed;
  for (const auto& [key, expected] : ref.expected.storage()) {
    const Rational got = computed.coefficient(key.alpha_pow, key.s_pow, key.log_pow);
    if (got != expected) out.mismatches.push_back({key, expected, got});
  }
  if (!ref.partial) {
    for (const auto& [key, got] : computed.storage()) {
      if (ref.expected.coefficient(key.alpha_pow, key.s_pow, key.log_pow) == 0) {
        out.mismatches.push_back({key, Rational(0), got});
      }
    }
  }
  out.matched = out.mismatches.empty();
  return out;
}

std::vector<CoefficientCheck> check_coefficients(int order, bool include_products) {
  const SolutionFamily first = generate_family(FamilyKind::first, order);
  const SolutionFamily second = generate_family(FamilyKind::second, order);

  std::vector<CoefficientCheck> out;
  for (const auto& ref : reference_iterates()) {
    const bool upper = ref.label[0] == 'F' || ref.label[0] == 'f';
    const bool is_first = ref.label[0] == 'F' || ref.label[0] == 'G';
    const std::size_t index = static_cast<std::size_t>(ref.label[1] - '0');
    const SolutionFamily& fam = is_first ? first : second;
    const auto& parts = upper ? fam.upper : fam.lower;
    if (index >= parts.size()) continue;
    out.push_back(compare_coefficients(ref, parts[index]));
  }
  if (include_products && order >= 1) {
    const LogPolySeries gg = product_density(first, second, ProductKind::GG).normalized();
    const LogPolySeries ff = product_density(first, second, ProductKind::FF).normalized();
    for (const auto& ref : reference_products()) {
      const int level = ref.expected.max_alpha_pow();
      if (level > 2 * order) continue;
      const LogPolySeries& full = ref.label.starts_with("GG") ? gg : ff;
      out.push_back(compare_coefficients(ref, full.alpha_part(level)));
    }
  }
  return out;
}

namespace {

std::string key_text(const TermKey& k) {
  std::ostringstream os;
  os << "α^" << k.alpha_pow << " s^" << k.s_pow << " (ln s)^" << k.log_pow;
  return os.str();
}

}  // namespace

nlohmann::json to_json(const CoefficientCheck& check) {
  nlohmann::json mism = nlohmann::json::array();
  for (const auto& m : check.mismatches) {
    mism.push_back({{"alpha_pow", m.key.alpha_pow},
                    {"s_pow", m.key.s_pow},
                    {"log_pow", m.key.log_pow},
                    {"expected", m.expected.get_str()},
                    {"computed", m.computed.get_str()}});
  }
  return {{"label", check.label},
          {"reference", check.description},
          {"partial", check.partial},
          {"matched", check.matched},
          {"computed", to_text(check.computed)},
          {"mismatches", mism}};
}

std::string to_text(const CoefficientCheck& check) {
  std::ostringstream os;
  os << (check.matched ? "MATCH    " : "MISMATCH ") << check.label << (check.partial ? " (leading terms)" : "")
     << "  " << check.description;
  for (const auto& m : check.mismatches) {
    os << "\n    " << key_text(m.key) << ": expected " << m.expected.get_str() << ", computed "
       << m.computed.get_str();
  }
  return os.str();
}

}  // namespace selfaction
