#include "selfaction/damped_integrals.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "selfaction/errors.hpp"
#include "selfaction/parallel.hpp"
#include "selfaction/root_finding.hpp"
#include "selfaction/series_solver.hpp"
#include "selfaction/special_functions.hpp"
#include "selfaction/summation.hpp"

namespace selfaction {

std::string_view to_string(MomentMode mode) { return mode == MomentMode::exact ? "exact" : "quadrature"; }

MomentMode moment_mode_from_string(std::string_view name) {
  if (name == "exact") return MomentMode::exact;
  if (name == "quadrature") return MomentMode::quadrature;
  throw std::invalid_argument("unknown moment mode: " + std::string(name));
}

std::string_view to_string(BetaMode mode) {
  switch (mode) {
    case BetaMode::asymptotic:
      return "asymptotic";
    case BetaMode::numeric:
      return "numeric";
    case BetaMode::full_series:
      return "full_series";
  }
  return "unknown";
}

namespace {

void check_moment(const DampedMoment& m) {
  if (!(m.eta > 0)) throw std::domain_error("damped moment: eta must be positive");
  if (m.q < 0) throw std::domain_error("damped moment: q must be non-negative");
}

double exact_moment(const DampedMoment& m) {
  const long double j = log_weighted_expint<long double>(m.p + 2, m.q, static_cast<long double>(m.eta));
  return static_cast<double>(m.q % 2 == 0 ? j : -j);
}

}  // namespace

QuadratureResult<double> damped_moment_quadrature(const DampedMoment& m, double tol) {
  check_moment(m);
  if (!(tol > 0)) throw std::domain_error("damped moment: tol must be positive");
  const double eta = m.eta;
  const int p = m.p;
  const int q = m.q;

  // integrand after s = eta/u:  e^{−u} s^p (ln s)^q eta/u²
  auto integrand = [eta, p, q](double u) {
    const double s = eta / u;
    return std::exp(-u) * std::pow(s, p) * std::pow(std::log(s), q) * eta / (u * u);
  };

  // shape of the integrand up to the constant eta^{p+1}, used to place the
  // upper cut where the remaining tail is negligible
  const double ln_eta = std::log(eta);
  auto shape = [ln_eta, p, q](double u) {
    return std::exp(-u - (p + 2) * std::log(u)) * std::pow(std::abs(ln_eta - std::log(u)), q);
  };
  double mass = 0;
  for (double u = eta; u < 80.0 + eta; u *= 2) mass = std::max(mass, shape(u) * u);
  const double past_peak = std::max({1.0, 2.0 * std::abs(p + 2) + q, 2.0 * eta});
  double upper = past_peak;
  while (shape(upper) > tol * 1e-3 * mass) upper += 1.0;

  std::vector<double> breakpoints{eta};
  for (double u = 2 * eta; u < upper; u *= 2) breakpoints.push_back(u);
  breakpoints.push_back(upper);
  return integrate_adaptive<double>(integrand, std::span<const double>(breakpoints), tol,
                                    std::numeric_limits<double>::min(), 20000);
}

double damped_moment(const DampedMoment& m, MomentMode mode, double tol) {
  check_moment(m);
  if (mode == MomentMode::exact) return exact_moment(m);
  return damped_moment_quadrature(m, tol).value;
}

double moment_small_eta_form(int p, int q, double eta) {
  if (q != 0 || p < -3) return std::numeric_limits<double>::quiet_NaN();
  switch (p) {
    case -3:
      return 1.0 / (eta * eta);
    case -2:
      return 1.0 / eta;
    case -1:
      return -std::log(eta) - euler_gamma<double>;
    case 0:
      return 1.0 + eta * std::log(eta);
    default:
      return 1.0 / (p + 1) - eta / p;
  }
}

double euler_probe(double eta) {
  if (!(eta > 0)) throw std::domain_error("euler_probe: eta must be positive");
  // E1(eta) + ln eta, evaluated in extended precision to keep the cancellation harmless
  const long double e = static_cast<long double>(eta);
  return static_cast<double>(expint_e1<long double>(e) + std::log(e));
}

CompiledSeries::CompiledSeries(const LogPolySeries& series) : max_alpha_pow(series.max_alpha_pow()) {
  std::map<std::pair<int, int>, std::size_t> index;
  for (const Term& t : series.terms()) {
    const auto [it, added] = index.emplace(std::pair{t.s_pow, t.log_pow}, moments.size());
    if (added) moments.emplace_back(t.s_pow, t.log_pow);
    entries.push_back({detail::to_real<double>(t.coeff), t.alpha_pow, it->second});
  }
}

DampedIntegral integrate_series_damped(const CompiledSeries& series, double eta, double alpha, MomentMode mode,
                                       double tol, int first_discarded_alpha_pow) {
  if (!(eta > 0)) throw std::domain_error("integrate_series_damped: eta must be positive");
  DampedIntegral out;
  out.terms = series.entries.size();
  if (series.entries.empty()) return out;
  const auto& keys = series.moments;

  std::vector<double> moments;
  if (mode == MomentMode::exact) {
    int p_lo = keys.front().first;
    int p_hi = p_lo;
    int q_hi = 0;
    for (const auto& [p, q] : keys) {
      p_lo = std::min(p_lo, p);
      p_hi = std::max(p_hi, p);
      q_hi = std::max(q_hi, q);
    }
    const auto table = log_weighted_expint_table<long double>(p_lo + 2, p_hi + 2, q_hi, static_cast<long double>(eta));
    moments.reserve(keys.size());
    for (const auto& [p, q] : keys) {
      const long double j = table(p + 2, q);
      moments.push_back(static_cast<double>(q % 2 == 0 ? j : -j));
    }
  } else {
    moments = parallel_map<double>(keys.size(), [&](std::size_t i) {
      return damped_moment({keys[i].first, keys[i].second, eta}, mode, tol);
    });
  }

  std::vector<double> contributions(series.entries.size());
  const int top = series.max_alpha_pow;
  CompensatedSum<double> top_level;
  for (std::size_t i = 0; i < series.entries.size(); ++i) {
    const auto& e = series.entries[i];
    contributions[i] = e.coeff * detail::int_pow(alpha, e.alpha_pow) * moments[e.moment];
    if (e.alpha_pow == top) top_level += contributions[i];
  }
  out.value = tree_sum<double>(contributions);
  if (first_discarded_alpha_pow > top) {
    out.truncation_estimate = std::abs(top_level.value()) * detail::int_pow(alpha, first_discarded_alpha_pow - top);
  }
  return out;
}

DampedIntegral integrate_series_damped(const LogPolySeries& series, double eta, double alpha, MomentMode mode,
                                       double tol, int first_discarded_alpha_pow) {
  return integrate_series_damped(CompiledSeries(series), eta, alpha, mode, tol, first_discarded_alpha_pow);
}

LogPolySeries beta_condition_series() {
  return LogPolySeries::monomial(1, 0, 0) - LogPolySeries::monomial(2, 0, 1) + LogPolySeries::monomial(1, 0, 2) -
         LogPolySeries::monomial(make_rational(1, 12), 2, -2);
}

double solve_beta_for_density(double alpha, const LogPolySeries& density, const BetaOptions& options,
                              double* residual) {
  return solve_beta_for_density(alpha, CompiledSeries(density), options, residual);
}

double solve_beta_for_density(double alpha, const CompiledSeries& density, const BetaOptions& options,
                              double* residual) {
  if (!(alpha > 0)) throw std::domain_error("solve_beta: alpha must be positive");
  const double a2 = alpha * alpha;
  double lo = std::isnan(options.bracket_lo) ? a2 / 100 : options.bracket_lo;
  double hi = std::isnan(options.bracket_hi) ? a2 : options.bracket_hi;
  if (!(lo > 0 && hi > lo)) throw std::invalid_argument("solve_beta: bracket must satisfy 0 < lo < hi");

  auto condition = [&](double beta) {
    return integrate_series_damped(density, 2 * beta, alpha, options.moment_mode, options.tol).value;
  };
  double f_lo = condition(lo);
  double f_hi = condition(hi);
  for (int widen = 0; widen < 6 && (f_lo < 0) == (f_hi < 0); ++widen) {
    lo /= 10;
    hi *= 2;
    f_lo = condition(lo);
    f_hi = condition(hi);
  }
  if ((f_lo < 0) == (f_hi < 0)) throw BracketError("solve_beta: no sign change of the beta condition");
  const RootResult<double> r = bracketed_root<double>(condition, lo, hi, options.tol * a2 / 8);
  if (residual != nullptr) *residual = r.f_root;
  return r.root;
}

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0 && alpha < 0.1)) throw std::domain_error("solve_beta: alpha must lie in (0, 0.1)");
}

LogPolySeries full_gg_density(int order) {
  const SolutionFamily first = generate_family(FamilyKind::first, order);
  const SolutionFamily second = generate_family(FamilyKind::second, order);
  return product_density(first, second, ProductKind::GG).normalized();
}

}  // namespace

BetaResult solve_beta(double alpha, const BetaOptions& options) {
  check_alpha(alpha);
  BetaResult out;
  out.alpha = alpha;
  out.beta_asymptotic = alpha * alpha / 8;
  out.beta_numeric = solve_beta_for_density(alpha, beta_condition_series(), options, &out.residual_numeric);
  out.beta_full_series =
      solve_beta_for_density(alpha, full_gg_density(options.order), options, &out.residual_full_series);
  return out;
}

double solve_beta(double alpha, BetaMode mode, const BetaOptions& options) {
  check_alpha(alpha);
  switch (mode) {
    case BetaMode::asymptotic:
      return alpha * alpha / 8;
    case BetaMode::numeric:
      return solve_beta_for_density(alpha, beta_condition_series(), options);
    case BetaMode::full_series:
      return solve_beta_for_density(alpha, full_gg_density(options.order), options);
  }
  throw std::invalid_argument("solve_beta: unknown mode");
}

double gauss_flux(double beta, double eps) {
  if (!(beta > 0 && eps > 0)) throw std::domain_error("gauss_flux: beta and eps must be positive");
  return std::exp(-beta / eps) - std::exp(-1.0 / beta);
}

}  // namespace selfaction
