#pragma once

// The eigenvalue condition
//
//   Ω1 ∫ (s/α) P w ds − Ω2 ∫ (s²/β) P w ds = λ ∫ P w ds,
//   Ω1 = cosh²√(α−β),  Ω2 = sinh²√(α−β),  λ = (α−β)^{1/(1+√α)},
//
// with P = (6/α) s² F̃ f̃ and w = exp(−2β/s). The closed form replaces the
// three integrals by their small-β values and β by α²/8.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "selfaction/damped_integrals.hpp"
#include "selfaction/log_poly_series.hpp"
#include "selfaction/series_solver.hpp"

namespace selfaction {

enum class EigenMode { eq64_closed, full_series };

std::string_view to_string(EigenMode mode);
/// Accepts "eq64_closed"/"eq64"/"closed" and "full_series"/"full".
EigenMode eigen_mode_from_string(std::string_view name);

/// The constant in the closed form: γ + 3/2 − 2/3 rounded as printed.
inline constexpr double kClosedFormConstant = 1.41055;

struct EigenConfig {
  double alpha_lo = 0.005;
  double alpha_hi = 0.01;
  /// Absolute tolerance on α.
  double tol = 1e-12;
  EigenMode mode = EigenMode::eq64_closed;
  /// Refinement order n for full_series: GG through α^{2n}, FF through α^{2n−2}.
  int series_order = 2;
  MomentMode moment_mode = MomentMode::exact;
  double quadrature_tol = 1e-12;
};

/// 1/(1+√α), the summed exponent Σ(−√α)^n of (α−β) in λ.
double lambda_exponent(double alpha);

struct EigenTerms {
  double alpha = 0;
  double beta = 0;
  double omega1 = 0;
  double omega2 = 0;
  double lambda = 0;
  /// ∫ (s/α) P w, ∫ (s²/β) P w, ∫ P w
  double integral_A = 0;
  double integral_B = 0;
  double integral_lambda = 0;

  double omega1_term() const { return omega1 * integral_A; }
  double omega2_term() const { return -omega2 * integral_B; }
  double lhs() const { return omega1_term() + omega2_term(); }
  double rhs() const { return lambda * integral_lambda; }
  double residual() const { return lhs() - rhs(); }
};

/// Precomputed densities for one mode and order; evaluates the condition at
/// any α in (0, 0.1).
class EigenProblem {
 public:
  explicit EigenProblem(const EigenConfig& cfg);
  /// full_series from given families; throws OrderMismatchError when the
  /// refinement order needs more iterates than the families carry.
  EigenProblem(const EigenConfig& cfg, const SolutionFamily& first, const SolutionFamily& second);

  EigenTerms evaluate(double alpha) const;
  const EigenConfig& config() const { return cfg_; }
  const LogPolySeries& gg_density() const { return gg_; }
  const LogPolySeries& ff_density() const { return ff_; }

 private:
  void build(const SolutionFamily& first, const SolutionFamily& second);

  EigenConfig cfg_;
  LogPolySeries gg_;
  LogPolySeries ff_;
  std::optional<CompiledSeries> gg_compiled_;
  std::optional<CompiledSeries> ff_compiled_[3];
};

EigenTerms eq64_residual(double alpha, EigenMode mode, int series_order = 2);

struct AlphaResult {
  double alpha_root = 0;
  double beta_implied = 0;
  EigenTerms terms;
  int iterations = 0;
  EigenMode mode = EigenMode::eq64_closed;
  int series_order = 0;
};

/// Bracketed bisection/secant on lhs − rhs. Throws BracketError without a
/// sign change and NonConvergenceError at the iteration cap.
AlphaResult solve_alpha(const EigenConfig& cfg);
AlphaResult solve_alpha(const EigenProblem& problem);

/// Sub-intervals of [lo, hi] (grid step `step`) on which lhs − rhs changes sign.
std::vector<std::pair<double, double>> scan_sign_changes(const EigenProblem& problem, double lo, double hi,
                                                         double step);

struct RefinementRow {
  /// 0 is the closed form, n >= 1 the full-series order.
  int order = 0;
  EigenMode mode = EigenMode::eq64_closed;
  double alpha = 0;
  double beta = 0;
  /// α(n) − α(n−1); NaN on the first row.
  double difference = 0;
  /// |difference(n)| / |difference(n−1)|; NaN where undefined.
  double ratio = 0;
  int iterations = 0;
};

struct RefinementTable {
  std::vector<RefinementRow> rows;
  double final_alpha = 0;
  /// |last difference|
  double uncertainty = 0;
};

/// Closed-form root followed by full-series roots for orders 1..max_order.
RefinementTable refine_alpha(int max_order, const EigenConfig& cfg);

nlohmann::json to_json(const AlphaResult& result);
nlohmann::json to_json(const RefinementTable& table);

}  // namespace selfaction
