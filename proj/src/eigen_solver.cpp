#include "selfaction/eigen_solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "selfaction/errors.hpp"
#include "selfaction/parallel.hpp"
#include "selfaction/root_finding.hpp"

namespace selfaction {

std::string_view to_string(EigenMode mode) { return mode == EigenMode::eq64_closed ? "eq64_closed" : "full_series"; }

EigenMode eigen_mode_from_string(std::string_view name) {
  if (name == "eq64_closed" || name == "eq64" || name == "closed") return EigenMode::eq64_closed;
  if (name == "full_series" || name == "full") return EigenMode::full_series;
  throw std::invalid_argument("unknown eigen mode: " + std::string(name));
}

double lambda_exponent(double alpha) {
  if (!(alpha >= 0)) throw std::domain_error("lambda_exponent: alpha must be non-negative");
  return 1.0 / (1.0 + std::sqrt(alpha));
}

EigenProblem::EigenProblem(const EigenConfig& cfg) : cfg_(cfg) {
  if (cfg_.mode == EigenMode::full_series) {
    if (cfg_.series_order < 1) throw std::invalid_argument("full_series needs series_order >= 1");
    build(generate_family(FamilyKind::first, cfg_.series_order),
          generate_family(FamilyKind::second, cfg_.series_order));
  }
}

EigenProblem::EigenProblem(const EigenConfig& cfg, const SolutionFamily& first, const SolutionFamily& second)
    : cfg_(cfg) {
  if (cfg_.mode != EigenMode::full_series) throw std::invalid_argument("families are only used by full_series");
  if (cfg_.series_order < 1) throw std::invalid_argument("full_series needs series_order >= 1");
  build(first, second);
}

void EigenProblem::build(const SolutionFamily& first, const SolutionFamily& second) {
  const int n = cfg_.series_order;
  gg_ = product_density(first, second, ProductKind::GG, n).normalized();
  ff_ = product_density(first, second, ProductKind::FF, n - 1).normalized();
  gg_compiled_.emplace(gg_);
  for (int k = 0; k < 3; ++k) ff_compiled_[k].emplace(ff_.shift_s(k));
}

EigenTerms EigenProblem::evaluate(double alpha) const {
  if (!(alpha > 0 && alpha < 0.1)) throw std::domain_error("eq64: alpha must lie in (0, 0.1)");
  EigenTerms t;
  t.alpha = alpha;
  if (cfg_.mode == EigenMode::eq64_closed) {
    t.beta = alpha * alpha / 8;
    t.integral_A = -(std::log(alpha * alpha / 4) + kClosedFormConstant) / alpha;
    t.integral_B = 4 / (alpha * alpha);
    t.integral_lambda = 4 / (alpha * alpha);
  } else {
    BetaOptions opts;
    opts.tol = cfg_.quadrature_tol;
    opts.moment_mode = cfg_.moment_mode;
    t.beta = solve_beta_for_density(alpha, *gg_compiled_, opts);
    const double eta = 2 * t.beta;
    const double qtol = cfg_.quadrature_tol;
    auto moment = [&](int k) {
      return integrate_series_damped(*ff_compiled_[k], eta, alpha, cfg_.moment_mode, qtol).value;
    };
    t.integral_A = moment(1) / alpha;
    t.integral_B = moment(2) / t.beta;
    t.integral_lambda = moment(0);
  }
  const double x = std::sqrt(alpha - t.beta);
  t.omega1 = std::cosh(x) * std::cosh(x);
  t.omega2 = std::sinh(x) * std::sinh(x);
  t.lambda = std::pow(alpha - t.beta, lambda_exponent(alpha));
  return t;
}

EigenTerms eq64_residual(double alpha, EigenMode mode, int series_order) {
  EigenConfig cfg;
  cfg.mode = mode;
  cfg.series_order = series_order;
  return EigenProblem(cfg).evaluate(alpha);
}

AlphaResult solve_alpha(const EigenProblem& problem) {
  const EigenConfig& cfg = problem.config();
  if (!(cfg.alpha_lo > 0 && cfg.alpha_hi > cfg.alpha_lo && cfg.alpha_hi < 0.1)) {
    throw std::invalid_argument("solve_alpha: bracket must satisfy 0 < lo < hi < 0.1");
  }
  auto f = [&problem](double a) { return problem.evaluate(a).residual(); };
  const RootResult<double> r = bracketed_root<double>(f, cfg.alpha_lo, cfg.alpha_hi, cfg.tol);
  AlphaResult out;
  out.alpha_root = r.root;
  out.terms = problem.evaluate(r.root);
  out.beta_implied = out.terms.beta;
  out.iterations = r.iterations;
  out.mode = cfg.mode;
  out.series_order = cfg.mode == EigenMode::full_series ? cfg.series_order : 0;
  return out;
}

AlphaResult solve_alpha(const EigenConfig& cfg) { return solve_alpha(EigenProblem(cfg)); }

std::vector<std::pair<double, double>> scan_sign_changes(const EigenProblem& problem, double lo, double hi,
                                                         double step) {
  if (!(step > 0 && hi > lo)) throw std::invalid_argument("scan_sign_changes: need lo < hi and step > 0");
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step));
  const std::vector<double> values = parallel_map<double>(n + 1, [&](std::size_t i) {
    const double a = std::min(hi, lo + static_cast<double>(i) * step);
    return problem.evaluate(a).residual();
  });
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < n; ++i) {
    if ((values[i] < 0) != (values[i + 1] < 0) || values[i] == 0) {
      out.emplace_back(lo + static_cast<double>(i) * step, std::min(hi, lo + static_cast<double>(i + 1) * step));
    }
  }
  return out;
}

RefinementTable refine_alpha(int max_order, const EigenConfig& cfg) {
  if (max_order < 1) throw std::invalid_argument("refine_alpha: max_order must be at least 1");
  RefinementTable table;
  const SolutionFamily first = generate_family(FamilyKind::first, max_order);
  const SolutionFamily second = generate_family(FamilyKind::second, max_order);
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  for (int order = 0; order <= max_order; ++order) {
    EigenConfig c = cfg;
    c.mode = order == 0 ? EigenMode::eq64_closed : EigenMode::full_series;
    c.series_order = order;
    const AlphaResult r = order == 0 ? solve_alpha(c) : solve_alpha(EigenProblem(c, first, second));
    RefinementRow row;
    row.order = order;
    row.mode = c.mode;
    row.alpha = r.alpha_root;
    row.beta = r.beta_implied;
    row.iterations = r.iterations;
    row.difference = table.rows.empty() ? nan : r.alpha_root - table.rows.back().alpha;
    row.ratio = table.rows.size() < 2 ? nan : std::abs(row.difference) / std::abs(table.rows.back().difference);
    table.rows.push_back(row);
  }
  table.final_alpha = table.rows.back().alpha;
  table.uncertainty = std::abs(table.rows.back().difference);
  return table;
}

namespace {

nlohmann::json number_or_null(double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); }

}  // namespace

nlohmann::json to_json(const AlphaResult& r) {
  const EigenTerms& t = r.terms;
  return {{"mode", std::string(to_string(r.mode))},
          {"series_order", r.series_order},
          {"alpha", r.alpha_root},
          {"beta", r.beta_implied},
          {"iterations", r.iterations},
          {"omega1", t.omega1},
          {"omega2", t.omega2},
          {"lambda", t.lambda},
          {"integral_A", t.integral_A},
          {"integral_B", t.integral_B},
          {"integral_lambda", t.integral_lambda},
          {"omega1_term", t.omega1_term()},
          {"omega2_term", t.omega2_term()},
          {"lambda_term", t.rhs()},
          {"lhs", t.lhs()},
          {"rhs", t.rhs()}};
}

nlohmann::json to_json(const RefinementTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"order", r.order},
                    {"mode", std::string(to_string(r.mode))},
                    {"alpha", r.alpha},
                    {"beta", r.beta},
                    {"difference", number_or_null(r.difference)},
                    {"ratio", number_or_null(r.ratio)},
                    {"iterations", r.iterations}});
  }
  return {{"rows", rows}, {"final_alpha", table.final_alpha}, {"uncertainty", table.uncertainty}};
}

}  // namespace selfaction
