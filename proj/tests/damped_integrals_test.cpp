#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "selfaction/damped_integrals.hpp"
#include "selfaction/errors.hpp"
#include "selfaction/parallel.hpp"
#include "selfaction/special_functions.hpp"
#include "test_support.hpp"

namespace selfaction {
namespace {

constexpr double kEulerGamma = 0.57721566490153286;

TEST(ExpInt, E1AgainstStandardLibrary) {
  for (double x : {1e-8, 1e-4, 0.3, 0.999, 1.0, 1.001, 2.5, 10.0, 40.0}) {
    const double oracle = -std::expint(-x);
    EXPECT_NEAR(expint_e1(x), oracle, 1e-14 * std::abs(oracle)) << x;
  }
  EXPECT_THROW(expint_e1(0.0), std::domain_error);
}

TEST(ExpInt, EnClosedFormsForNonPositiveOrder) {
  for (double x : {1e-3, 0.5, 3.0}) {
    EXPECT_NEAR(expint_en(0, x), std::exp(-x) / x, 1e-15 * std::exp(-x) / x);
    const double em1 = std::exp(-x) * (1 / x + 1 / (x * x));
    EXPECT_NEAR(expint_en(-1, x), em1, 1e-15 * em1);
  }
}

TEST(ExpInt, EnRecurrenceHoldsAcrossSeriesAndFractionBranches) {
  // n E_{n+1}(x) = e^{−x} − x E_n(x)
  for (double x : {0.01, 0.7, 1.0, 1.5, 6.0}) {
    for (int n = 1; n <= 8; ++n) {
      const double lhs = n * expint_en(n + 1, x);
      const double rhs = std::exp(-x) - x * expint_en(n, x);
      EXPECT_NEAR(lhs, rhs, 1e-13 * std::exp(-x)) << "n=" << n << " x=" << x;
    }
  }
}

TEST(ExpInt, GammaDerivativesAtOne) {
  const auto g = gamma_derivatives_at_one<double>(3);
  constexpr double pi2 = M_PI * M_PI;
  EXPECT_DOUBLE_EQ(g[0], 1.0);
  EXPECT_NEAR(g[1], -kEulerGamma, 1e-15);
  EXPECT_NEAR(g[2], kEulerGamma * kEulerGamma + pi2 / 6, 1e-14);
  const double zeta3 = 1.2020569031595942;
  EXPECT_NEAR(g[3], -(std::pow(kEulerGamma, 3) + kEulerGamma * pi2 / 2 + 2 * zeta3), 1e-13);
}

TEST(LogWeightedExpint, MatchesDirectQuadrature) {
  // ∫₁^∞ e^{−xt} t^{−n} (ln t)^q dt by adaptive quadrature in t
  for (double x : {1e-3, 0.2, 1.0, 3.5}) {
    for (int n : {-2, 0, 1, 2, 5}) {
      for (int q : {1, 2, 3}) {
        auto f = [&](double t) { return std::exp(-x * t) * std::pow(t, -n) * std::pow(std::log(t), q); };
        const std::vector<double> bp = [&] {
          std::vector<double> v{1.0};
          while (v.back() < 200.0 / x) v.push_back(v.back() * 2);
          return v;
        }();
        const double oracle = integrate_adaptive<double>(f, std::span<const double>(bp), 1e-13, 0.0, 50000).value;
        EXPECT_NEAR(static_cast<double>(log_weighted_expint<long double>(n, q, x)), oracle, 1e-11 * std::abs(oracle))
            << "n=" << n << " q=" << q << " x=" << x;
      }
    }
  }
  EXPECT_THROW(log_weighted_expint(1, 1, 5.0), std::domain_error);
}

TEST(LogWeightedExpint, TableMatchesSingleEntries) {
  for (long double x : {1e-5L, 0.3L, 2.0L}) {
    const auto table = log_weighted_expint_table<long double>(-4, 6, 3, x);
    EXPECT_EQ(table.n_min(), -4);
    EXPECT_EQ(table.q_max(), 3);
    for (int n = -4; n <= 6; ++n) {
      for (int q = 0; q <= 3; ++q) {
        const long double single = log_weighted_expint<long double>(n, q, x);
        EXPECT_NEAR(static_cast<double>(table(n, q)), static_cast<double>(single),
                    1e-15 * std::abs(static_cast<double>(single)))
            << "n=" << n << " q=" << q << " x=" << static_cast<double>(x);
      }
    }
    EXPECT_THROW(table(7, 0), std::out_of_range);
    EXPECT_THROW(table(0, 4), std::out_of_range);
  }
  EXPECT_THROW(log_weighted_expint_table<double>(3, 2, 1, 0.5), std::invalid_argument);
}

TEST(DampedMoment, ClosedFormExamples) {
  EXPECT_NEAR(damped_moment({-2, 0, 0.1}), 9.048374180359595, 1e-13);
  for (double eta : {1e-2, 0.37, 2.0}) {
    const double expected = std::exp(-eta) * (1 / (eta * eta) + 1 / eta);
    EXPECT_NEAR(damped_moment({-3, 0, eta}), expected, 1e-14 * expected);
  }
  const double eta = 1e-6;
  EXPECT_NEAR(damped_moment({1, 0, eta}), 0.5 - eta, 1e-5);
  EXPECT_NEAR(damped_moment({1, 0, eta}, MomentMode::quadrature), 0.5 - eta, 1e-5);
}

TEST(DampedMoment, ClosedFormsAgainstQuadratureAtTightTolerance) {
  for (double eta : {1e-2, 1e-4, 1e-6}) {
    const double m3 = std::exp(-eta) * (1 / (eta * eta) + 1 / eta);
    const double m2 = std::exp(-eta) / eta;
    EXPECT_NEAR(damped_moment({-3, 0, eta}, MomentMode::quadrature, 1e-13), m3, 1e-12 * m3) << eta;
    EXPECT_NEAR(damped_moment({-2, 0, eta}, MomentMode::quadrature, 1e-13), m2, 1e-12 * m2) << eta;
  }
}

TEST(DampedMoment, ExactAgreesWithQuadratureOverGrid) {
  for (double eta : {1e-2, 1e-4, 1e-6}) {
    for (int p = -6; p <= 6; ++p) {
      for (int q = 0; q <= 2; ++q) {
        const double exact = damped_moment({p, q, eta});
        const double quad = damped_moment({p, q, eta}, MomentMode::quadrature, 1e-12);
        EXPECT_NEAR(exact, quad, 2e-12 * std::abs(exact)) << "p=" << p << " q=" << q << " eta=" << eta;
      }
    }
  }
}

TEST(DampedMoment, LargerEtaAgreement) {
  for (double eta : {0.5, 3.0}) {
    for (int p = -3; p <= 3; ++p) {
      for (int q = 0; q <= 2; ++q) {
        const double exact = damped_moment({p, q, eta});
        const double quad = damped_moment({p, q, eta}, MomentMode::quadrature, 1e-12);
        EXPECT_NEAR(exact, quad, 2e-12 * std::abs(exact)) << "p=" << p << " q=" << q << " eta=" << eta;
      }
    }
  }
  EXPECT_NEAR(damped_moment({0, 0, 20.0}), expint_en(2, 20.0), 1e-25);
}

TEST(DampedMoment, RejectsBadArguments) {
  EXPECT_THROW(damped_moment({0, 0, 0.0}), std::domain_error);
  EXPECT_THROW(damped_moment({0, -1, 0.1}), std::domain_error);
  EXPECT_THROW(damped_moment({0, 0, 0.1}, MomentMode::quadrature, 0.0), std::domain_error);
  EXPECT_EQ(moment_mode_from_string("quadrature"), MomentMode::quadrature);
  EXPECT_THROW(moment_mode_from_string("fast"), std::invalid_argument);
}

TEST(DampedMoment, EtaDerivativeOfInverseMoment) {
  // ∂_eta ∫ w s⁻¹ = −∫ w s⁻²
  for (double eta : {1e-4, 1e-2, 0.3}) {
    const double h = 1e-3 * eta;
    const double fd = (damped_moment({-1, 0, eta + h}) - damped_moment({-1, 0, eta - h})) / (2 * h);
    const double expected = -damped_moment({-2, 0, eta});
    EXPECT_NEAR(fd, expected, 1e-6 * std::abs(expected)) << eta;
  }
}

TEST(DampedMoment, SmallEtaFormsForPositivePowers) {
  const double eta = 1e-5;
  for (int k = 1; k <= 6; ++k) {
    EXPECT_NEAR(damped_moment({k, 0, eta}), moment_small_eta_form(k, 0, eta), 10 * eta * eta * std::abs(std::log(eta)) + 1e-12);
  }
  EXPECT_TRUE(std::isnan(moment_small_eta_form(-4, 0, eta)));
  EXPECT_TRUE(std::isnan(moment_small_eta_form(0, 1, eta)));
}

TEST(EulerProbe, ApproachesMinusEulerGamma) {
  // the printed 12-digit constant has two digits transposed; the limit is −γ
  EXPECT_NEAR(euler_probe(1e-8), -kEulerGamma, 1e-7);
  EXPECT_GT(std::abs(euler_probe(1e-8) - -0.577216664906), 1e-6);
  EXPECT_NEAR(euler_probe(1e-4), -kEulerGamma, 1e-3);
  for (double eta = 1e-1; eta > 1e-9; eta /= 10) {
    EXPECT_LT(std::abs(euler_probe(eta / 10) + kEulerGamma), std::abs(euler_probe(eta) + kEulerGamma));
  }
  // probe matches the quadrature moment shifted by ln eta
  const double eta = 1e-4;
  EXPECT_NEAR(euler_probe(eta), damped_moment({-1, 0, eta}, MomentMode::quadrature) + std::log(eta), 1e-10);
}

TEST(IntegrateSeriesDamped, ConstantSeries) {
  const double eta = 1e-3;
  const DampedIntegral r = integrate_series_damped(LogPolySeries::constant(1), eta, 0.0073);
  // exact value is E2(eta) = 0.9926689...; the small-eta form 1 + eta ln eta
  // drops an O(eta) term, so they differ by about 4e-4 here
  EXPECT_NEAR(r.value, expint_en(2, eta), 1e-15);
  EXPECT_NEAR(r.value, 1 + eta * std::log(eta), 5e-4);
  EXPECT_EQ(r.terms, 1U);
}

TEST(IntegrateSeriesDamped, QuadraticVanishingAtOne) {
  const LogPolySeries s = test::mono(1, 1, 0, 0) + test::mono(-2, 1, 0, 1) + test::mono(1, 1, 0, 2);
  for (double eta : {1e-3, 1e-5, 1e-7}) {
    const double v = integrate_series_damped(s, eta, 0.0073).value;
    EXPECT_NEAR(v, 1.0 / 3.0, 3 * eta * std::abs(std::log(eta))) << eta;
  }
}

TEST(IntegrateSeriesDamped, ZeroSeriesAndModesAgree) {
  EXPECT_EQ(integrate_series_damped(LogPolySeries{}, 0.1, 0.5).value, 0.0);
  const LogPolySeries s = beta_condition_series();
  const double a = integrate_series_damped(s, 2e-5, 0.0073).value;
  const double b = integrate_series_damped(s, 2e-5, 0.0073, MomentMode::quadrature, 1e-13).value;
  EXPECT_NEAR(a, b, 1e-12);
}

TEST(IntegrateSeriesDamped, LinearInSeries) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 40; ++i) {
    const LogPolySeries a = test::random_series(rng, 5);
    const LogPolySeries b = test::random_series(rng, 5);
    const double eta = 0.01;
    const double alpha = 0.3;
    const double lhs = integrate_series_damped(a + b, eta, alpha).value;
    const double rhs = integrate_series_damped(a, eta, alpha).value + integrate_series_damped(b, eta, alpha).value;
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::max({1.0, std::abs(lhs), std::abs(rhs)}));
  }
}

TEST(IntegrateSeriesDamped, TruncationEstimateFromDiscardedOrder) {
  const LogPolySeries s = test::mono(1, 1, 0, 0) + test::mono(1, 1, 2, -2);
  const double eta = 1e-2;
  const double alpha = 0.01;
  const DampedIntegral r = integrate_series_damped(s, eta, alpha, MomentMode::exact, 1e-12, 4);
  EXPECT_NEAR(r.truncation_estimate, alpha * alpha * alpha * alpha * damped_moment({-2, 0, eta}), 1e-18);
  EXPECT_EQ(integrate_series_damped(s, eta, alpha).truncation_estimate, 0.0);
}

TEST(IntegrateSeriesDamped, IndependentOfThreadCount) {
  const LogPolySeries s = test::mono(3, 7, 0, -5, 2) + beta_condition_series() + test::mono(-5, 3, 1, 4, 1);
  set_thread_count(1);
  const double one = integrate_series_damped(s, 1e-4, 0.0073).value;
  set_thread_count(4);
  const double four = integrate_series_damped(s, 1e-4, 0.0073).value;
  set_thread_count(1);
  EXPECT_EQ(one, four);
}

TEST(SolveBeta, AsymptoticIsExact) {
  for (double alpha : {0.0073, 0.003, 0.05}) {
    EXPECT_EQ(solve_beta(alpha, BetaMode::asymptotic), alpha * alpha / 8);
    EXPECT_EQ(solve_beta(alpha).beta_asymptotic, alpha * alpha / 8);
  }
  // 0.0073² / 8 = 5.329e-5 / 8
  EXPECT_DOUBLE_EQ(solve_beta(0.0073, BetaMode::asymptotic), 6.66125e-6);
}

TEST(SolveBeta, NumericCloseToAsymptoticAndConverging) {
  double previous_gap = 1.0;
  for (double alpha : {0.0073, 0.003, 0.001}) {
    const BetaResult r = solve_beta(alpha);
    const double gap = std::abs(r.beta_numeric / r.beta_asymptotic - 1);
    EXPECT_LT(gap, 0.1) << alpha;
    EXPECT_LT(gap, previous_gap) << alpha;
    previous_gap = gap;
    EXPECT_NEAR(r.beta_full_series / r.beta_asymptotic, 1.0, 0.01) << alpha;
  }
}

TEST(SolveBeta, RootSatisfiesConditionAgainstQuadrature) {
  const double alpha = 0.0073;
  const double beta = solve_beta(alpha, BetaMode::numeric);
  const LogPolySeries s = beta_condition_series();
  // scale of the condition is 1/3; the quadrature residual at the root is tiny
  EXPECT_NEAR(integrate_series_damped(s, 2 * beta, alpha, MomentMode::quadrature, 1e-13).value, 0.0, 1e-10);
  // independent oracle value: ratio 1.0003926054816747
  EXPECT_NEAR(beta / (alpha * alpha / 8), 1.0003926054816747, 1e-9);
}

TEST(SolveBeta, DomainAndBracketErrors) {
  EXPECT_THROW(solve_beta(0.0, BetaMode::numeric), std::domain_error);
  EXPECT_THROW(solve_beta(0.2, BetaMode::numeric), std::domain_error);
  // a density with no sign change
  EXPECT_THROW(solve_beta_for_density(0.0073, LogPolySeries::constant(1)), BracketError);
}

TEST(GaussFlux, Limits) {
  EXPECT_NEAR(gauss_flux(1e-6, 0.1), 1.0, 1e-4);
  EXPECT_EQ(gauss_flux(1.0, 1.0), 0.0);
  double previous = gauss_flux(0.5, 0.1);
  for (double beta = 0.25; beta > 1e-6; beta /= 2) {
    const double flux = gauss_flux(beta, 0.1);
    EXPECT_GT(flux, previous);
    EXPECT_LT(flux, 1.0);
    previous = flux;
  }
  EXPECT_THROW(gauss_flux(0.0, 0.1), std::domain_error);
}

}  // namespace
}  // namespace selfaction
