#include "selfaction/densities.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "selfaction/errors.hpp"
#include "selfaction/summation.hpp"

namespace selfaction {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

Eigen::Matrix4cd make_gamma(GammaIndex which) {
  Eigen::Matrix4cd g = Eigen::Matrix4cd::Zero();
  switch (which) {
    case GammaIndex::g1:
      g.setIdentity();
      break;
    case GammaIndex::g2:
      g(0, 3) = g(1, 2) = g(2, 1) = g(3, 0) = 1.0;
      break;
    case GammaIndex::g3:
      g(0, 3) = -kI;
      g(1, 2) = kI;
      g(2, 1) = -kI;
      g(3, 0) = kI;
      break;
    case GammaIndex::g4:
      g(0, 2) = 1.0;
      g(1, 3) = -1.0;
      g(2, 0) = 1.0;
      g(3, 1) = -1.0;
      break;
    case GammaIndex::g5:
      g.diagonal() << 1.0, 1.0, -1.0, -1.0;
      break;
  }
  return g;
}

}  // namespace

const Eigen::Matrix4cd& gamma_matrix(GammaIndex which) {
  static const std::array<Eigen::Matrix4cd, 5> all = {make_gamma(GammaIndex::g1), make_gamma(GammaIndex::g2),
                                                      make_gamma(GammaIndex::g3), make_gamma(GammaIndex::g4),
                                                      make_gamma(GammaIndex::g5)};
  return all[static_cast<std::size_t>(which) - 1];
}

Complex spherical_harmonic(int l, int m, double theta, double phi) {
  if (l < 0 || std::abs(m) > l) throw std::domain_error("spherical_harmonic: need l >= 0 and |m| <= l");
  if (m < 0) {
    const Complex y = std::conj(spherical_harmonic(l, -m, theta, phi));
    return (m % 2 == 0) ? y : -y;
  }
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const Complex e = std::polar(1.0, m * phi);
  switch (l * 10 + m) {
    case 0:
      return 0.5 / std::sqrt(kPi);
    case 10:
      return std::sqrt(3.0 / (4 * kPi)) * c;
    case 11:
      return -std::sqrt(3.0 / (8 * kPi)) * s * e;
    case 20:
      return std::sqrt(5.0 / (16 * kPi)) * (3 * c * c - 1);
    case 21:
      return -std::sqrt(15.0 / (8 * kPi)) * s * c * e;
    case 22:
      return std::sqrt(15.0 / (32 * kPi)) * s * s * e;
    default:
      return std::sph_legendre(static_cast<unsigned>(l), static_cast<unsigned>(m), theta) * e;
  }
}

std::string_view to_string(SolutionKind kind) {
  return kind == SolutionKind::first_solution ? "first_solution" : "second_solution";
}

std::string_view to_string(Particle particle) { return particle == Particle::electron ? "electron" : "positron"; }

RadialPair series_radial_pair(const SolutionFamily& family, double alpha, double beta, std::string upper_tag,
                              std::string lower_tag) {
  const LogPolySeries up = family.upper_sum();
  const LogPolySeries low = family.lower_sum();
  RadialPair out;
  out.upper_tag = std::move(upper_tag);
  out.lower_tag = std::move(lower_tag);
  out.upper = [up, alpha, beta](double s) { return eval_numeric(up, s, alpha) * std::exp(-beta / s); };
  out.lower = [low, alpha, beta](double s) { return eval_numeric(low, s, alpha) * std::exp(-beta / s); };
  return out;
}

Eigen::Vector4cd BispinorState::components(double s, double theta, double phi) const {
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  const double up = radial.upper ? radial.upper(s) : 0.0;
  const double low = radial.lower ? radial.lower(s) : 0.0;
  for (std::size_t a = 0; a < 4; ++a) {
    const ComponentSpec& c = spec[a];
    if (!c.present) continue;
    v(static_cast<Eigen::Index>(a)) = c.phase * std::sqrt(c.weight.get_d()) * (c.upper ? up : low) *
                                      spherical_harmonic(c.l, c.m, theta, phi);
  }
  return v;
}

namespace {

// phase · [num/den]^{1/2} · radial · Y_{l, twice_ml/2}
ComponentSpec component(Complex phase, long num, long den, bool upper, int twice_l, int twice_ml) {
  ComponentSpec c;
  if (num <= 0) return c;
  c.present = true;
  c.phase = phase;
  c.weight = make_rational(num, den);
  c.upper = upper;
  c.l = twice_l / 2;
  c.m = twice_ml / 2;
  return c;
}

}  // namespace

BispinorState build_bispinor(SolutionKind kind, int twice_m, RadialPair radial, int twice_j) {
  if (twice_j < 1 || twice_j % 2 == 0) throw std::invalid_argument("build_bispinor: j must be a positive half-integer");
  if (std::abs(twice_m) > twice_j || (twice_m - twice_j) % 2 != 0) {
    throw std::invalid_argument("build_bispinor: m must be in {-j, ..., j}");
  }
  BispinorState st;
  st.kind = kind;
  st.twice_j = twice_j;
  st.twice_m = twice_m;
  st.radial = std::move(radial);
  const int tj = twice_j;
  const int tm = twice_m;
  // Y_{j+1/2, m∓1/2} part with weights (j+1∓m)/(2(j+1)); Y_{j−1/2, m∓1/2} with (j±m)/(2j)
  const ComponentSpec big_minus = component(1.0, tj + 2 - tm, 2 * (tj + 2), true, tj + 1, tm - 1);
  const ComponentSpec big_plus = component(-1.0, tj + 2 + tm, 2 * (tj + 2), true, tj + 1, tm + 1);
  const ComponentSpec small_minus = component(kI, tj + tm, 2 * tj, false, tj - 1, tm - 1);
  const ComponentSpec small_plus = component(kI, tj - tm, 2 * tj, false, tj - 1, tm + 1);
  if (kind == SolutionKind::first_solution) {
    st.spec = {big_minus, big_plus, small_minus, small_plus};
  } else {
    st.spec = {small_minus, small_plus, big_minus, big_plus};
  }
  return st;
}

namespace {

struct PrintedTerm {
  int sign;
  int a;
  int b;
};

Eigen::Matrix4cd printed_matrix(bool imaginary, std::initializer_list<PrintedTerm> terms) {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  for (const auto& t : terms) m(t.a - 1, t.b - 1) = (imaginary ? kI : Complex(1.0)) * static_cast<double>(t.sign);
  return m;
}

std::vector<DensityOperator> build_operators() {
  const auto& g1 = gamma_matrix(GammaIndex::g1);
  const auto& g2 = gamma_matrix(GammaIndex::g2);
  const auto& g3 = gamma_matrix(GammaIndex::g3);
  const auto& g4 = gamma_matrix(GammaIndex::g4);
  const auto& g5 = gamma_matrix(GammaIndex::g5);
  std::vector<DensityOperator> ops;
  auto add = [&ops](std::string id, std::string label, std::string name, const Eigen::Matrix4cd& matrix,
                    std::string printed_text, bool imaginary, std::initializer_list<PrintedTerm> terms,
                    bool has_gamma5) {
    ops.push_back({std::move(id), std::move(label), std::move(name), matrix, printed_matrix(imaginary, terms),
                   std::move(printed_text), has_gamma5});
  };
  add("g1", "γ1", "Energy", g1, "1·1+2·2+3·3+4·4", false, {{1, 1, 1}, {1, 2, 2}, {1, 3, 3}, {1, 4, 4}}, false);
  add("g2", "γ2", "", g2, "1·4+2·3+3·2+4·1", false, {{1, 1, 4}, {1, 2, 3}, {1, 3, 2}, {1, 4, 1}}, false);
  add("g3", "γ3", "", g3, "i(−1·4+2·3−3·2+4·1)", true, {{-1, 1, 4}, {1, 2, 3}, {-1, 3, 2}, {1, 4, 1}}, false);
  add("g4", "γ4", "", g4, "1·3−2·4+3·1−4·2", false, {{1, 1, 3}, {-1, 2, 4}, {1, 3, 1}, {-1, 4, 2}}, false);
  add("g2g3g4", "γ2γ3γ4", "", g2 * g3 * g4, "i(1·3+2·4+3·1+4·2)", true,
      {{1, 1, 3}, {1, 2, 4}, {1, 3, 1}, {1, 4, 2}}, false);
  add("ig3g4", "iγ3γ4", "", kI * g3 * g4, "−1·2−2·1−3·4−4·3", false,
      {{-1, 1, 2}, {-1, 2, 1}, {-1, 3, 4}, {-1, 4, 3}}, false);
  add("ig4g2", "iγ4γ2", "", kI * g4 * g2, "i(1·2−2·1+3·4−4·3)", true,
      {{1, 1, 2}, {-1, 2, 1}, {1, 3, 4}, {-1, 4, 3}}, false);
  add("ig2g3", "iγ2γ3", "S_z", kI * g2 * g3, "−1·1+2·2−3·3+4·4", false,
      {{-1, 1, 1}, {1, 2, 2}, {-1, 3, 3}, {1, 4, 4}}, false);
  add("g5", "γ5", "Charge e", g5, "1·1+2·2−3·3−4·4", false, {{1, 1, 1}, {1, 2, 2}, {-1, 3, 3}, {-1, 4, 4}}, true);
  add("g2g3g4g5", "γ2γ3γ4γ5", "", g2 * g3 * g4 * g5, "i(−1·3−2·4+3·4+4·2)", true,
      {{-1, 1, 3}, {-1, 2, 4}, {1, 3, 4}, {1, 4, 2}}, true);
  add("ig3g4g5", "iγ3γ4γ5", "", kI * g3 * g4 * g5, "−1·2−2·1+3·4+4·3", false,
      {{-1, 1, 2}, {-1, 2, 1}, {1, 3, 4}, {1, 4, 3}}, true);
  add("ig4g2g5", "iγ4γ2γ5", "", kI * g4 * g2 * g5, "i(1·2−2·1−3·4+4·3)", true,
      {{1, 1, 2}, {-1, 2, 1}, {-1, 3, 4}, {1, 4, 3}}, true);
  add("ig2g3g5", "iγ2γ3γ5", "M_z", kI * g2 * g3 * g5, "−1·1+2·2+3·3−4·4", false,
      {{-1, 1, 1}, {1, 2, 2}, {1, 3, 3}, {-1, 4, 4}}, true);
  add("ig2g5", "iγ2γ5", "", kI * g2 * g5, "i(−1·4−2·3+3·2+4·1)", true,
      {{-1, 1, 4}, {-1, 2, 3}, {1, 3, 2}, {1, 4, 1}}, true);
  add("ig3g5", "iγ3γ5", "", kI * g3 * g5, "−1·4+2·3+3·2−4·1", false,
      {{-1, 1, 4}, {1, 2, 3}, {1, 3, 2}, {-1, 4, 1}}, true);
  add("ig4g5", "iγ4γ5", "", kI * g4 * g5, "i(−1·3+2·4+3·1−4·2)", true,
      {{-1, 1, 3}, {1, 2, 4}, {1, 3, 1}, {-1, 4, 2}}, true);
  return ops;
}

}  // namespace

const std::vector<DensityOperator>& density_operators() {
  static const std::vector<DensityOperator> ops = build_operators();
  return ops;
}

const DensityOperator& density_operator(std::string_view id) {
  std::string_view key = id;
  if (id == "E") key = "g1";
  if (id == "S_z") key = "ig2g3";
  if (id == "e") key = "g5";
  if (id == "M_z") key = "ig2g3g5";
  for (const auto& op : density_operators()) {
    if (op.id == key) return op;
  }
  throw std::invalid_argument("unknown density operator: " + std::string(id));
}

std::string density_text(const Eigen::Matrix4cd& c) {
  bool imaginary = true;
  bool any = false;
  for (Eigen::Index a = 0; a < 4; ++a) {
    for (Eigen::Index b = 0; b < 4; ++b) {
      if (std::abs(c(a, b)) == 0.0) continue;
      any = true;
      if (c(a, b).real() != 0.0) imaginary = false;
    }
  }
  if (!any) return "0";
  std::ostringstream os;
  bool first = true;
  for (Eigen::Index a = 0; a < 4; ++a) {
    for (Eigen::Index b = 0; b < 4; ++b) {
      if (std::abs(c(a, b)) == 0.0) continue;
      const double v = imaginary ? c(a, b).imag() : c(a, b).real();
      if (v < 0) {
        os << "−";
      } else if (!first) {
        os << "+";
      }
      if (std::abs(v) != 1.0) os << std::abs(v) << "·";
      os << (a + 1) << "·" << (b + 1);
      first = false;
    }
  }
  return imaginary ? "i(" + os.str() + ")" : os.str();
}

Complex bilinear_density(const BispinorState& left, const DensityOperator& op, const BispinorState& right,
                         double s, double theta, double phi) {
  const Eigen::Vector4cd l = left.components(s, theta, phi);
  const Eigen::Vector4cd r = right.components(s, theta, phi);
  return l.dot(op.matrix * r);  // dot conjugates the left argument
}

namespace {

// Gauss–Legendre nodes and weights on [−1, 1] by Newton iteration on P_n.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(static_cast<std::size_t>(n));
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    x[lo] = -z;
    x[hi] = z;
    w[lo] = w[hi] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

}  // namespace

Complex integrate_sphere(const std::function<Complex(double, double)>& f, const AngularQuadrature& quad) {
  if (quad.theta_nodes < 3 || quad.phi_nodes < 5) {
    throw QuadratureResolutionError("angular quadrature needs at least 3 theta and 5 phi nodes");
  }
  const auto [x, w] = gauss_legendre(quad.theta_nodes);
  const double dphi = 2 * kPi / quad.phi_nodes;
  CompensatedSum<double> re;
  CompensatedSum<double> im;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double theta = std::acos(x[i]);
    for (int k = 0; k < quad.phi_nodes; ++k) {
      const Complex v = w[i] * dphi * f(theta, k * dphi);
      re += v.real();
      im += v.imag();
    }
  }
  return {re.value(), im.value()};
}

std::vector<AngularTerm> DensityTable::table_terms() const {
  std::vector<AngularTerm> out;
  for (const auto& t : terms) {
    if (t.upper) out.push_back(t);
  }
  return out;
}

bool DensityTable::survives() const {
  for (const auto& t : terms) {
    if (t.re != 0 || t.im != 0) return true;
  }
  return false;
}

namespace {

RadialPair tag_only(std::string upper, std::string lower) {
  RadialPair r;
  r.upper_tag = std::move(upper);
  r.lower_tag = std::move(lower);
  return r;
}

int exact_unit(double v) {
  const double r = std::round(v);
  if (std::abs(v - r) > 1e-12) throw std::logic_error("angular_reduce: non-integer operator entry");
  return static_cast<int>(r);
}

}  // namespace

DensityTable angular_reduce(std::string_view operator_id, Particle particle, int twice_m,
                            const AngularQuadrature& quad) {
  const DensityOperator& op = density_operator(operator_id);
  const bool electron = particle == Particle::electron;
  const SolutionKind kind = electron ? SolutionKind::first_solution : SolutionKind::second_solution;
  const BispinorState left = build_bispinor(kind, twice_m, electron ? tag_only("F", "G") : tag_only("K", "L"));
  const BispinorState right = build_bispinor(kind, twice_m, electron ? tag_only("f", "g") : tag_only("k", "l"));

  DensityTable table;
  table.operator_id = op.id;
  table.particle = particle;
  table.twice_m = twice_m;

  std::map<std::tuple<bool, std::string, int, int, int>, std::size_t> index;
  for (std::size_t a = 0; a < 4; ++a) {
    const ComponentSpec& ca = left.spec[a];
    if (!ca.present) continue;
    for (std::size_t b = 0; b < 4; ++b) {
      const ComponentSpec& cb = right.spec[b];
      const Complex entry = op.matrix(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (!cb.present || std::abs(entry) == 0.0) continue;
      const Complex unit = std::conj(ca.phase) * entry * cb.phase;
      const double mag = std::sqrt(ca.weight.get_d() * cb.weight.get_d());
      if (ca.l == cb.l && ca.m == cb.m) {
        if (ca.weight != cb.weight) throw std::logic_error("angular_reduce: unequal weights on one harmonic");
        const std::string radial =
            (ca.upper ? left.radial.upper_tag : left.radial.lower_tag) +
            (cb.upper ? right.radial.upper_tag : right.radial.lower_tag);
        const auto key = std::tuple{!ca.upper, radial, ca.l, std::abs(ca.m), ca.m};
        auto [it, inserted] = index.emplace(key, table.terms.size());
        if (inserted) table.terms.push_back({radial, ca.upper, ca.l, ca.m, Rational(0), Rational(0), {}});
        AngularTerm& t = table.terms[it->second];
        t.re += ca.weight * exact_unit(unit.real());
        t.im += ca.weight * exact_unit(unit.imag());
      } else {
        const Complex cross = integrate_sphere(
            [&](double th, double ph) {
              return unit * mag * std::conj(spherical_harmonic(ca.l, ca.m, th, ph)) *
                     spherical_harmonic(cb.l, cb.m, th, ph);
            },
            quad);
        table.max_cross_integral = std::max(table.max_cross_integral, std::abs(cross));
      }
    }
  }
  // upper products first, then by l and |m|
  std::vector<AngularTerm> ordered;
  for (const auto& [key, i] : index) ordered.push_back(table.terms[i]);
  for (auto& t : ordered) {
    const Complex coeff(t.re.get_d(), t.im.get_d());
    t.integrated = integrate_sphere(
        [&](double th, double ph) { return coeff * std::norm(spherical_harmonic(t.l, t.m, th, ph)); }, quad);
  }
  table.terms = std::move(ordered);
  return table;
}

std::string table_entry_text(const std::vector<AngularTerm>& terms) {
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms) {
    if (t.re == 0 && t.im == 0) continue;
    const Rational& v = t.im == 0 ? t.re : t.im;
    if (v < 0) {
      os << (first ? "-" : " - ");
    } else if (!first) {
      os << " + ";
    }
    os << Rational(abs(v)).get_str() << (t.im == 0 ? "" : "i") << "*" << t.radial << "*|Y" << t.l << t.m << "|^2";
    first = false;
  }
  return first ? "0" : os.str();
}

const std::vector<PrintedTableEntry>& printed_density_tables() {
  using T = std::tuple<Rational, int, int>;
  auto r = [](long n, long d) { return make_rational(n, d); };
  static const std::vector<PrintedTableEntry> tables = [&] {
    std::vector<PrintedTableEntry> v;
    for (Particle p : {Particle::electron, Particle::positron}) {
      const long q = p == Particle::electron ? 1 : -1;  // sign of the γ5 rows
      v.push_back({p, "E", 1, {T{r(1, 3), 1, 0}, T{r(2, 3), 1, 1}}});
      v.push_back({p, "E", -1, {T{r(1, 3), 1, 0}, T{r(2, 3), 1, -1}}});
      v.push_back({p, "S_z", 1, {T{r(-1, 3), 1, 0}, T{r(2, 3), 1, 1}}});
      v.push_back({p, "S_z", -1, {T{r(1, 3), 1, 0}, T{r(-2, 3), 1, -1}}});
      v.push_back({p, "e", 1, {T{r(q, 3), 1, 0}, T{r(2 * q, 3), 1, 1}}});
      v.push_back({p, "e", -1, {T{r(q, 3), 1, 0}, T{r(2 * q, 3), 1, -1}}});
      v.push_back({p, "M_z", 1, {T{r(-q, 3), 1, 0}, T{r(2 * q, 3), 1, 1}}});
      v.push_back({p, "M_z", -1, {T{r(q, 3), 1, 0}, T{r(-2 * q, 3), 1, -1}}});
    }
    return v;
  }();
  return tables;
}

std::vector<TableCheck> check_density_tables(const AngularQuadrature& quad) {
  std::vector<TableCheck> out;
  for (const auto& printed : printed_density_tables()) {
    TableCheck c;
    c.printed = printed;
    c.computed = angular_reduce(printed.row, printed.particle, printed.twice_m, quad);
    const std::vector<AngularTerm> got = c.computed.table_terms();
    c.matched = got.size() == printed.terms.size();
    for (const auto& [frac, l, m] : printed.terms) {
      bool found = false;
      for (const auto& t : got) {
        if (t.l == l && t.m == m) found = t.re == frac && t.im == 0;
      }
      c.matched = c.matched && found;
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<OperatorCheck> check_density_operators() {
  std::vector<OperatorCheck> out;
  for (const auto& op : density_operators()) {
    OperatorCheck c;
    c.op = &op;
    c.computed = op.matrix;
    c.matches_printed = (op.matrix - op.printed).cwiseAbs().maxCoeff() == 0.0;
    c.survives = angular_reduce(op.id, Particle::electron, 1).survives();
    out.push_back(c);
  }
  return out;
}

nlohmann::json to_json(const DensityTable& table) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : table.terms) {
    terms.push_back({{"radial", t.radial},
                     {"harmonic", {t.l, t.m}},
                     {"fraction", t.re.get_str()},
                     {"fraction_imag", t.im.get_str()},
                     {"integrated", t.integrated.real()},
                     {"in_table", t.upper}});
  }
  return {{"operator", table.operator_id},
          {"particle", std::string(to_string(table.particle))},
          {"m", table.twice_m > 0 ? "1/2" : "-1/2"},
          {"terms", terms},
          {"max_cross_integral", table.max_cross_integral},
          {"survives", table.survives()}};
}

nlohmann::json to_json(const OperatorCheck& check) {
  return {{"id", check.op->id},
          {"operator", check.op->label},
          {"name", check.op->name},
          {"printed_density", check.op->printed_text},
          {"computed_density", density_text(check.computed)},
          {"matches_printed", check.matches_printed},
          {"contains_gamma5", check.op->has_gamma5},
          {"survives_volume_integration", check.survives}};
}

InvariantDensities invariants_I1_I2(const SolutionFamily& first, const SolutionFamily& second) {
  const ProductDensity gg = product_density(first, second, ProductKind::GG);
  const ProductDensity ff = product_density(first, second, ProductKind::FF);
  const LogPolySeries inv_s2 = LogPolySeries::monomial(1, 0, -2);
  return {gg.series * inv_s2, ff.series * inv_s2};
}

double invariant_density(const BispinorState& left, const BispinorState& right, bool second_invariant, double s,
                         double theta, double phi) {
  const Complex d1 = bilinear_density(left, density_operator("g1"), right, s, theta, phi);
  const Complex d5 = bilinear_density(left, density_operator("g5"), right, s, theta, phi);
  return (2 * kPi * (second_invariant ? d1 + d5 : d1 - d5)).real();
}

}  // namespace selfaction
