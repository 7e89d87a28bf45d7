#pragma once

// Damped moments  M(p, q; eta) = ∫₀¹ exp(−eta/s) s^p (ln s)^q ds  and the
// beta condition built on them. With u = eta/s the moment becomes
//   (−1)^q ∫₁^∞ e^{−eta t} t^{−(p+2)} (ln t)^q dt,
// a log-weighted generalized exponential integral.

#include <cstddef>
#include <limits>
#include <string_view>

#include "selfaction/log_poly_series.hpp"
#include "selfaction/quadrature.hpp"

namespace selfaction {

struct DampedMoment {
  int p = 0;
  int q = 0;
  double eta = 0;
};

enum class MomentMode { exact, quadrature };

std::string_view to_string(MomentMode mode);
/// Throws std::invalid_argument for unknown names.
MomentMode moment_mode_from_string(std::string_view name);

/// Exact mode is limited to eta <= 4 when q >= 1 (std::domain_error beyond).
/// Quadrature mode treats tol as a relative tolerance and throws
/// NonConvergenceError when the subdivision limit is hit.
double damped_moment(const DampedMoment& m, MomentMode mode = MomentMode::exact, double tol = 1e-12);

QuadratureResult<double> damped_moment_quadrature(const DampedMoment& m, double tol);

/// The small-eta forms for q = 0:
///   p = −3: 1/eta²,  p = −2: 1/eta,  p = −1: −ln eta − γ,
///   p =  0: 1 + eta ln eta,  p >= 1: 1/(p+1) − eta/p.
/// NaN where no such form exists.
double moment_small_eta_form(int p, int q, double eta);

/// M(−1, 0; eta) + ln eta, which tends to −γ as eta → 0.
double euler_probe(double eta);

struct DampedIntegral {
  double value = 0;
  /// |contribution of the highest retained alpha level| · alpha^(gap to the
  /// first discarded level); 0 when no discarded level is given.
  double truncation_estimate = 0;
  std::size_t terms = 0;
};

/// Series terms converted to double once, grouped by (s_pow, log_pow) moment.
struct CompiledSeries {
  struct Entry {
    double coeff;
    int alpha_pow;
    std::size_t moment;
  };
  std::vector<Entry> entries;
  std::vector<std::pair<int, int>> moments;
  int max_alpha_pow = 0;

  explicit CompiledSeries(const LogPolySeries& series);
};

DampedIntegral integrate_series_damped(const CompiledSeries& series, double eta, double alpha,
                                       MomentMode mode = MomentMode::exact, double tol = 1e-12,
                                       int first_discarded_alpha_pow = -1);

/// ∫₀¹ exp(−eta/s) S(s; alpha) ds term by term. Moments are evaluated in
/// parallel and summed in a fixed order.
DampedIntegral integrate_series_damped(const LogPolySeries& series, double eta, double alpha,
                                       MomentMode mode = MomentMode::exact, double tol = 1e-12,
                                       int first_discarded_alpha_pow = -1);

enum class BetaMode { asymptotic, numeric, full_series };

std::string_view to_string(BetaMode mode);

struct BetaOptions {
  /// Relative tolerance on beta for the root solve.
  double tol = 1e-12;
  /// Family order used for the full product density.
  int order = 2;
  MomentMode moment_mode = MomentMode::exact;
  /// Initial beta bracket; NaN selects (alpha²/100, alpha²).
  double bracket_lo = std::numeric_limits<double>::quiet_NaN();
  double bracket_hi = std::numeric_limits<double>::quiet_NaN();
};

struct BetaResult {
  double alpha = 0;
  double beta_asymptotic = 0;
  double beta_numeric = 0;
  double beta_full_series = 0;
  /// Condition value at the returned root.
  double residual_numeric = 0;
  double residual_full_series = 0;
};

/// (1 − s)² − (alpha²/12) s⁻², the truncated GG density used by numeric mode.
LogPolySeries beta_condition_series();

/// Root in beta of ∫₀¹ exp(−2 beta/s) density(s; alpha) ds = 0. The bracket
/// is widened geometrically a few times before BracketError is thrown.
double solve_beta_for_density(double alpha, const LogPolySeries& density, const BetaOptions& options = {},
                              double* residual = nullptr);
double solve_beta_for_density(double alpha, const CompiledSeries& density, const BetaOptions& options = {},
                              double* residual = nullptr);

/// All three modes together. Requires 0 < alpha < 0.1.
BetaResult solve_beta(double alpha, const BetaOptions& options = {});

double solve_beta(double alpha, BetaMode mode, const BetaOptions& options = {});

/// exp(−beta/eps) − exp(−1/beta): flux through a sphere of radius eps about
/// the damped charge, tending to 1 as beta → 0.
double gauss_flux(double beta, double eps);

}  // namespace selfaction
