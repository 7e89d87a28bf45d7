#include <cmath>

#include <gtest/gtest.h>

#include "selfaction/reference_iterates.hpp"
#include "selfaction/series_solver.hpp"
#include "test_support.hpp"

namespace selfaction {
namespace {

using test::mono;

const ReferenceIterate& ref(const std::string& label) {
  static const auto all = [] {
    auto v = reference_iterates();
    auto p = reference_products();
    v.insert(v.end(), p.begin(), p.end());
    return v;
  }();
  for (const auto& r : all) {
    if (r.label == label) return r;
  }
  throw std::out_of_range(label);
}

TEST(FStep, FromUnitGenerator) {
  EXPECT_EQ(f_step(LogPolySeries::constant(1)), ref("F0").expected);
}

TEST(FStep, ZeroMapsToZero) {
  EXPECT_TRUE(f_step(LogPolySeries{}).empty());
  EXPECT_TRUE(g_step(LogPolySeries{}).empty());
}

TEST(FStep, SecondIterateIncludingThirtyOneFifteenths) {
  const LogPolySeries F1 = f_step(ref("G1").expected);
  EXPECT_EQ(F1, ref("F1").expected);
  EXPECT_EQ(F1.coefficient(3, -2), make_rational(31, 15 * 12));
}

TEST(GStep, Examples) {
  EXPECT_EQ(g_step(ref("F0").expected), ref("G1").expected);
  EXPECT_EQ(g_step(LogPolySeries::monomial(1, 0, -2)), ref("g0").expected);
  const LogPolySeries G2 = g_step(ref("F1").expected);
  EXPECT_EQ(G2, ref("G2").expected);
  EXPECT_EQ(G2.coefficient(4, 0, 2), make_rational(3, 2 * 12));
}

TEST(GenerateFamily, FirstFamilyThroughSecondOrder) {
  const SolutionFamily fam = generate_family(FamilyKind::first, 2);
  ASSERT_EQ(fam.upper.size(), 3U);
  ASSERT_EQ(fam.lower.size(), 3U);
  EXPECT_EQ(fam.upper[0], ref("F0").expected);
  EXPECT_EQ(fam.lower[1], ref("G1").expected);
  EXPECT_EQ(fam.upper[1], ref("F1").expected);
  EXPECT_EQ(fam.lower[2], ref("G2").expected);
}

TEST(GenerateFamily, SecondFamilyThroughFirstOrder) {
  const SolutionFamily fam = generate_family(FamilyKind::second, 1);
  EXPECT_EQ(fam.upper[0], LogPolySeries::monomial(1, 0, -2));
  EXPECT_EQ(fam.lower[0], ref("g0").expected);
  EXPECT_EQ(fam.upper[1], ref("f1").expected);
  EXPECT_EQ(fam.lower[1], ref("g1").expected);
}

TEST(GenerateFamily, OrderZero) {
  const SolutionFamily fam = generate_family(FamilyKind::first, 0);
  ASSERT_EQ(fam.lower.size(), 1U);
  EXPECT_EQ(fam.lower[0], LogPolySeries::constant(1));
  EXPECT_THROW(generate_family(FamilyKind::first, -1), std::invalid_argument);
}

TEST(GenerateFamily, VanishingAndAlphaStructureInvariants) {
  for (int order = 0; order <= 4; ++order) {
    const SolutionFamily first = generate_family(FamilyKind::first, order);
    const SolutionFamily second = generate_family(FamilyKind::second, order);
    for (int k = 0; k <= order; ++k) {
      // first family: every F_k and G_{k>=1} vanishes with its derivative at s=1
      EXPECT_TRUE(eval_at_one(first.upper[k]).empty());
      EXPECT_EQ(first.upper[k].min_alpha_pow(), 2 * k + 1);
      EXPECT_EQ(first.upper[k].max_alpha_pow(), 2 * k + 1);
      EXPECT_EQ(first.lower[k].min_alpha_pow(), 2 * k);
      EXPECT_EQ(first.lower[k].max_alpha_pow(), 2 * k);
      if (k >= 1) {
        EXPECT_TRUE(eval_at_one(first.lower[k]).empty());
        EXPECT_TRUE(eval_at_one(differentiate(first.lower[k])).empty());
      }
      EXPECT_TRUE(eval_at_one(differentiate(first.upper[k])).empty());
      // second family: g_k always, f_{k>=1}, and their derivatives
      EXPECT_TRUE(eval_at_one(second.lower[k]).empty());
      EXPECT_TRUE(eval_at_one(differentiate(second.lower[k])).empty());
      if (k >= 1) {
        EXPECT_TRUE(eval_at_one(second.upper[k]).empty());
        EXPECT_TRUE(eval_at_one(differentiate(second.upper[k])).empty());
      }
      EXPECT_EQ(second.upper[k].min_alpha_pow(), 2 * k);
      EXPECT_EQ(second.lower[k].min_alpha_pow(), 2 * k + 1);
    }
  }
}

TEST(RadialResidual, VanishesThroughRetainedOrder) {
  for (int order = 0; order <= 3; ++order) {
    for (FamilyKind kind : {FamilyKind::first, FamilyKind::second}) {
      const SolutionFamily fam = generate_family(kind, order);
      const RadialResidual r = radial_residual(fam);
      const int retained = std::max(fam.upper_sum().max_alpha_pow(), fam.lower_sum().max_alpha_pow());
      if (!r.upper_equation.empty()) EXPECT_GT(r.upper_equation.min_alpha_pow(), retained);
      if (!r.lower_equation.empty()) EXPECT_GT(r.lower_equation.min_alpha_pow(), retained);
      EXPECT_FALSE(r.upper_equation.empty() && r.lower_equation.empty());
    }
  }
}

class ProductDensityTest : public ::testing::Test {
 protected:
  SolutionFamily first = generate_family(FamilyKind::first, 2);
  SolutionFamily second = generate_family(FamilyKind::second, 2);
};

TEST_F(ProductDensityTest, GgLeadingAndAlphaSquaredBrackets) {
  const LogPolySeries gg = product_density(first, second, ProductKind::GG).normalized();
  EXPECT_EQ(gg.alpha_part(0), ref("GG[α⁰]").expected);
  EXPECT_EQ(gg.alpha_part(2), ref("GG[α²]").expected);
  const LogPolySeries a4 = gg.alpha_part(4);
  EXPECT_EQ(a4.coefficient(4, -2), make_rational(147, 60 * 12));
  EXPECT_EQ(a4.coefficient(4, -2, 1), make_rational(1, 12));
}

TEST_F(ProductDensityTest, FfLeadingAndAlphaSquaredBrackets) {
  const LogPolySeries ff = product_density(first, second, ProductKind::FF).normalized();
  EXPECT_EQ(ff.alpha_part(0), ref("FF[α⁰]").expected);
  EXPECT_EQ(ff.alpha_part(2), ref("FF[α²]").expected);
}

TEST_F(ProductDensityTest, TruncationBookkeeping) {
  const ProductDensity gg = product_density(first, second, ProductKind::GG);
  EXPECT_EQ(gg.max_alpha_pow, 5);
  EXPECT_EQ(gg.first_discarded_alpha_pow, 7);
  EXPECT_EQ(gg.series.max_alpha_pow(), 5);
  const ProductDensity gg1 = product_density(first, second, ProductKind::GG, 1);
  EXPECT_EQ(gg1.series.max_alpha_pow(), 3);
  EXPECT_THROW(product_density(first, second, ProductKind::GG, 3), OrderMismatchError);
  EXPECT_THROW(product_density(second, first, ProductKind::GG), std::invalid_argument);
}

TEST_F(ProductDensityTest, ProductsVanishAtClassicalRadius) {
  // G g and F f vanish at s = 1 through every retained order.
  for (ProductKind which : {ProductKind::GG, ProductKind::FF}) {
    const ProductDensity p = product_density(first, second, which);
    EXPECT_TRUE(eval_at_one(p.series).empty());
    EXPECT_TRUE(eval_at_one(differentiate(p.series)).empty());
  }
}

TEST(ExternalSolutionTest, ClosedForms) {
  const ExternalSolution ext = external_solution(0.25);
  EXPECT_DOUBLE_EQ(ext.G(1.0), std::exp(-0.25));
  EXPECT_DOUBLE_EQ(ext.f(2.0), std::exp(-0.125) / 4.0);
  for (double s : {1.0, 1.5, 3.0, 100.0}) {
    EXPECT_EQ(ext.F(s), 0.0);
    EXPECT_EQ(ext.g(s), 0.0);
    EXPECT_EQ(ext.product(s), 0.0);
  }
  EXPECT_THROW(ext.G(0.5), std::domain_error);
  EXPECT_THROW(external_solution(0.0), std::domain_error);
}

TEST(CheckCoefficients, EverythingMatchesAtOrderTwo) {
  const auto checks = check_coefficients(2);
  EXPECT_EQ(checks.size(), 12U);
  for (const auto& c : checks) EXPECT_TRUE(c.matched) << to_text(c);
}

TEST(CheckCoefficients, ReportsInjectedMismatch) {
  ReferenceIterate bad = ref("F1");
  bad.expected += mono(1, 100, 3, 1);
  const CoefficientCheck c = compare_coefficients(bad, f_step(ref("G1").expected));
  EXPECT_FALSE(c.matched);
  ASSERT_EQ(c.mismatches.size(), 1U);
  EXPECT_EQ(c.mismatches[0].key, (TermKey{3, 1, 0}));
}

}  // namespace
}  // namespace selfaction
