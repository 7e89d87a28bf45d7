#include "selfaction/series_solver.hpp"

#include <algorithm>
#include <cmath>

namespace selfaction {

std::string_view to_string(FamilyKind kind) {
  return kind == FamilyKind::first ? "first" : "second";
}

namespace {

LogPolySeries sum_parts(const std::vector<LogPolySeries>& parts) {
  LogPolySeries out;
  for (const auto& p : parts) out += p;
  return out;
}

// alpha (1 - 1/s)
const LogPolySeries& coupling() {
  static const LogPolySeries c =
      LogPolySeries::monomial(1, 1, 0) - LogPolySeries::monomial(1, 1, -1);
  return c;
}

}  // namespace

LogPolySeries SolutionFamily::upper_sum() const { return sum_parts(upper); }
LogPolySeries SolutionFamily::lower_sum() const { return sum_parts(lower); }

LogPolySeries f_step(const LogPolySeries& lower) {
  const LogPolySeries integrand = (coupling() * lower).shift_s(2);
  const LogPolySeries primitive = antiderivative(integrand);
  return (primitive - eval_at_one(primitive)).shift_s(-2);
}

LogPolySeries g_step(const LogPolySeries& upper) {
  const LogPolySeries primitive = -antiderivative(coupling() * upper);
  return primitive - eval_at_one(primitive);
}

SolutionFamily generate_family(FamilyKind kind, int order) {
  if (order < 0) throw std::invalid_argument("generate_family: order must be non-negative");
  SolutionFamily fam;
  fam.kind = kind;
  fam.order = order;
  if (kind == FamilyKind::first) {
    fam.lower.push_back(LogPolySeries::constant(1));
    for (int k = 0; k <= order; ++k) {
      fam.upper.push_back(f_step(fam.lower[k]));
      if (k < order) fam.lower.push_back(g_step(fam.upper[k]));
    }
  } else {
    fam.upper.push_back(LogPolySeries::monomial(1, 0, -2));
    for (int k = 0; k <= order; ++k) {
      fam.lower.push_back(g_step(fam.upper[k]));
      if (k < order) fam.upper.push_back(f_step(fam.lower[k]));
    }
  }
  return fam;
}

LogPolySeries ProductDensity::normalized() const {
  const Rational scale = kind == ProductKind::GG ? Rational(2) : Rational(6);
  return series.shift_alpha(-1) * scale;
}

ProductDensity product_density(const SolutionFamily& first, const SolutionFamily& second,
                               ProductKind which, int level) {
  if (first.kind != FamilyKind::first || second.kind != FamilyKind::second) {
    throw std::invalid_argument("product_density: expects (first, second) families");
  }
  // G_k ~ alpha^{2k}, g_k ~ alpha^{2k+1}, F_k ~ alpha^{2k+1}, f_k ~ alpha^{2k}:
  // both products are complete through alpha^{2n+1} with n the smaller order.
  const int available = std::min(first.order, second.order);
  if (level > available) {
    throw OrderMismatchError("product_density: requested level " + std::to_string(level) +
                             " exceeds generated order " + std::to_string(available));
  }
  const int n = level < 0 ? available : level;
  const LogPolySeries raw = which == ProductKind::GG ? first.lower_sum() * second.lower_sum()
                                                     : first.upper_sum() * second.upper_sum();
  ProductDensity out;
  out.kind = which;
  out.max_alpha_pow = 2 * n + 1;
  out.first_discarded_alpha_pow = 2 * n + 3;
  out.series = raw.truncate_alpha(out.max_alpha_pow).shift_s(2);
  return out;
}

RadialResidual radial_residual(const SolutionFamily& family) {
  const LogPolySeries F = family.upper_sum();
  const LogPolySeries G = family.lower_sum();
  RadialResidual r;
  r.upper_equation = differentiate(F.shift_s(2)).shift_s(-2) - coupling() * G;
  r.lower_equation = -differentiate(G) - coupling() * F;
  return r;
}

ExternalSolution::ExternalSolution(double beta) : beta_(beta) {
  if (!(beta > 0)) throw std::domain_error("external_solution: beta must be positive");
}

void ExternalSolution::check(double s) const {
  if (!(s >= 1.0)) throw std::domain_error("external solution is defined for s >= 1 only");
}

double ExternalSolution::G(double s) const {
  check(s);
  return std::exp(-beta_ / s);
}

double ExternalSolution::F(double s) const {
  check(s);
  return 0.0;
}

double ExternalSolution::f(double s) const {
  check(s);
  return std::exp(-beta_ / s) / (s * s);
}

double ExternalSolution::g(double s) const {
  check(s);
  return 0.0;
}

double ExternalSolution::product(double s) const { return G(s) * g(s) + F(s) * f(s); }

ExternalSolution external_solution(double beta) { return ExternalSolution(beta); }

}  // namespace selfaction
