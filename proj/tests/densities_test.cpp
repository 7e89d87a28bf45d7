#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "selfaction/densities.hpp"
#include "selfaction/errors.hpp"

namespace selfaction {
namespace {

constexpr double kPi = std::numbers::pi;

RadialPair constant_pair(std::string up, std::string low, double u, double l) {
  RadialPair r;
  r.upper_tag = std::move(up);
  r.lower_tag = std::move(low);
  r.upper = [u](double) { return u; };
  r.lower = [l](double) { return l; };
  return r;
}

TEST(SphericalHarmonic, ClosedFormsMatchLegendreFallback) {
  for (int l = 0; l <= 2; ++l) {
    for (int m = 0; m <= l; ++m) {
      for (double th : {0.1, 0.9, 2.3}) {
        const Complex y = spherical_harmonic(l, m, th, 0.7);
        const Complex ref = std::sph_legendre(l, m, th) * std::polar(1.0, m * 0.7);
        EXPECT_NEAR(std::abs(y - ref), 0.0, 1e-15) << l << " " << m;
      }
    }
  }
  EXPECT_NEAR(spherical_harmonic(0, 0, 1.2, 3.0).real(), 1 / std::sqrt(4 * kPi), 1e-16);
  EXPECT_THROW(spherical_harmonic(1, 2, 0.0, 0.0), std::domain_error);
  EXPECT_THROW(spherical_harmonic(-1, 0, 0.0, 0.0), std::domain_error);
}

TEST(SphericalHarmonic, OrthonormalThroughSecondDegree) {
  for (int l1 = 0; l1 <= 3; ++l1) {
    for (int m1 = -l1; m1 <= l1; ++m1) {
      for (int l2 = 0; l2 <= 2; ++l2) {
        for (int m2 = -l2; m2 <= l2; ++m2) {
          const Complex v = integrate_sphere([&](double th, double ph) {
            return std::conj(spherical_harmonic(l1, m1, th, ph)) * spherical_harmonic(l2, m2, th, ph);
          });
          const double expected = (l1 == l2 && m1 == m2) ? 1.0 : 0.0;
          EXPECT_NEAR(std::abs(v - expected), 0.0, 1e-12) << l1 << m1 << l2 << m2;
        }
      }
    }
  }
}

TEST(SphericalHarmonic, CoarseQuadratureRejected) {
  auto one = [](double, double) { return Complex(1.0); };
  EXPECT_THROW(integrate_sphere(one, {2, 16}), QuadratureResolutionError);
  EXPECT_THROW(integrate_sphere(one, {8, 4}), QuadratureResolutionError);
  EXPECT_NEAR(integrate_sphere(one, {3, 5}).real(), 4 * kPi, 1e-13);
}

TEST(GammaMatrices, CliffordRelationsAndGammaFive) {
  // γ2..γ4 square to one and anticommute pairwise; γ5 anticommutes with them
  const GammaIndex space[] = {GammaIndex::g2, GammaIndex::g3, GammaIndex::g4};
  const Eigen::Matrix4cd id = Eigen::Matrix4cd::Identity();
  for (auto a : space) {
    EXPECT_TRUE((gamma_matrix(a) * gamma_matrix(a)).isApprox(id));
    EXPECT_TRUE((gamma_matrix(a) * gamma_matrix(GammaIndex::g5) + gamma_matrix(GammaIndex::g5) * gamma_matrix(a))
                    .isZero());
    EXPECT_TRUE(gamma_matrix(a).isApprox(gamma_matrix(a).adjoint()));
    for (auto b : space) {
      if (a == b) continue;
      EXPECT_TRUE((gamma_matrix(a) * gamma_matrix(b) + gamma_matrix(b) * gamma_matrix(a)).isZero());
    }
  }
  EXPECT_TRUE(gamma_matrix(GammaIndex::g1).isApprox(id));
}

TEST(BuildBispinor, FirstSolutionHalfSpin) {
  const BispinorState st = build_bispinor(SolutionKind::first_solution, 1, constant_pair("F", "G", 2.0, 3.0));
  const double th = 0.8;
  const double ph = 1.3;
  const Eigen::Vector4cd v = st.components(0.5, th, ph);
  EXPECT_NEAR(std::abs(v(0) - 2.0 * spherical_harmonic(1, 0, th, ph) / std::sqrt(3.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(v(1) + std::sqrt(2.0 / 3.0) * 2.0 * spherical_harmonic(1, 1, th, ph)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(v(2) - Complex(0, 1) * 3.0 * spherical_harmonic(0, 0, th, ph)), 0.0, 1e-15);
  EXPECT_EQ(v(3), Complex(0.0));
  EXPECT_EQ(st.spec[0].weight, make_rational(1, 3));
}

TEST(BuildBispinor, SecondSolutionHalfSpin) {
  const BispinorState st = build_bispinor(SolutionKind::second_solution, 1, constant_pair("K", "L", 2.0, 3.0));
  const double th = 2.1;
  const double ph = -0.4;
  const Eigen::Vector4cd v = st.components(0.5, th, ph);
  EXPECT_NEAR(std::abs(v(0) - Complex(0, 1) * 3.0 * spherical_harmonic(0, 0, th, ph)), 0.0, 1e-15);
  EXPECT_EQ(v(1), Complex(0.0));
  EXPECT_NEAR(std::abs(v(2) - 2.0 * spherical_harmonic(1, 0, th, ph) / std::sqrt(3.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(v(3) + std::sqrt(2.0 / 3.0) * 2.0 * spherical_harmonic(1, 1, th, ph)), 0.0, 1e-15);
}

TEST(BuildBispinor, NegativeProjection) {
  const BispinorState st = build_bispinor(SolutionKind::first_solution, -1, constant_pair("F", "G", 1.0, 1.0));
  EXPECT_EQ(st.spec[0].weight, make_rational(2, 3));
  EXPECT_EQ(st.spec[0].m, -1);
  EXPECT_EQ(st.spec[1].weight, make_rational(1, 3));
  EXPECT_EQ(st.spec[1].m, 0);
  EXPECT_FALSE(st.spec[2].present);
  EXPECT_TRUE(st.spec[3].present);
  EXPECT_EQ(st.spec[3].l, 0);
  EXPECT_THROW(build_bispinor(SolutionKind::first_solution, 3, {}), std::invalid_argument);
}

TEST(BuildBispinor, GeneralJNormalization) {
  // at any j the four weights sum to 2 and the state is normalized on the sphere
  for (int tj : {1, 3, 5}) {
    for (int tm = -tj; tm <= tj; tm += 2) {
      const BispinorState st = build_bispinor(SolutionKind::first_solution, tm, constant_pair("F", "G", 1, 1), tj);
      Rational total = 0;
      for (const auto& c : st.spec) {
        if (c.present) total += c.weight;
      }
      EXPECT_EQ(total, Rational(2));
      const Complex norm = integrate_sphere(
          [&](double th, double ph) { return Complex(st.components(0.5, th, ph).squaredNorm()); }, {12, 24});
      EXPECT_NEAR(norm.real(), 2.0, 1e-12);
    }
  }
}

TEST(DensityOperators, AllRowsButOneMatchPrintedDensities) {
  const auto checks = check_density_operators();
  ASSERT_EQ(checks.size(), 16U);
  for (const auto& c : checks) {
    if (c.op->id == "g2g3g4g5") {
      EXPECT_FALSE(c.matches_printed);
      EXPECT_EQ(density_text(c.computed), "i(−1·3−2·4+3·1+4·2)");
    } else {
      EXPECT_TRUE(c.matches_printed) << c.op->id << ": " << density_text(c.computed);
      EXPECT_EQ(density_text(c.computed), c.op->printed_text) << c.op->id;
    }
  }
}

TEST(DensityOperators, SurvivorsAreTheFourDiagonalRows) {
  for (const auto& c : check_density_operators()) {
    const bool expected = c.op->id == "g1" || c.op->id == "ig2g3" || c.op->id == "g5" || c.op->id == "ig2g3g5";
    EXPECT_EQ(c.survives, expected) << c.op->id;
  }
  EXPECT_THROW(density_operator("g7"), std::invalid_argument);
  EXPECT_EQ(density_operator("M_z").id, "ig2g3g5");
}

TEST(BilinearDensity, EnergyDensityCollapsesToMonopole) {
  const BispinorState left = build_bispinor(SolutionKind::first_solution, 1, constant_pair("F", "G", 0.7, -1.3));
  const BispinorState right = build_bispinor(SolutionKind::first_solution, 1, constant_pair("f", "g", 2.1, 0.4));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> th(0.0, kPi);
  std::uniform_real_distribution<double> ph(0.0, 2 * kPi);
  const double y00sq = 1 / (4 * kPi);
  for (int i = 0; i < 200; ++i) {
    const Complex d = bilinear_density(left, density_operator("g1"), right, 0.5, th(rng), ph(rng));
    EXPECT_NEAR(d.real(), y00sq * (0.7 * 2.1 + -1.3 * 0.4), 1e-12);
    EXPECT_NEAR(d.imag(), 0.0, 1e-12);
  }
}

TEST(BilinearDensity, GammaFiveFlipsLowerProduct) {
  const BispinorState left = build_bispinor(SolutionKind::first_solution, 1, constant_pair("F", "G", 0.0, 1.5));
  const BispinorState right = build_bispinor(SolutionKind::first_solution, 1, constant_pair("f", "g", 0.0, 2.0));
  const Complex d1 = bilinear_density(left, density_operator("g1"), right, 0.5, 0.3, 0.2);
  const Complex d5 = bilinear_density(left, density_operator("g5"), right, 0.5, 0.3, 0.2);
  EXPECT_NEAR(d1.real(), 3.0 / (4 * kPi), 1e-15);
  EXPECT_NEAR(d5.real(), -d1.real(), 1e-15);
  const BispinorState zero = build_bispinor(SolutionKind::first_solution, 1, constant_pair("f", "g", 0.0, 0.0));
  EXPECT_EQ(bilinear_density(left, density_operator("ig4g5"), zero, 0.5, 0.3, 0.2), Complex(0.0));
}

TEST(BilinearDensity, SymmetryOfSurvivingDensities) {
  const BispinorState left = build_bispinor(SolutionKind::first_solution, 1, constant_pair("F", "G", 0.7, -1.3));
  const BispinorState right = build_bispinor(SolutionKind::first_solution, 1, constant_pair("f", "g", 2.1, 0.4));
  for (double theta : {0.2, 1.1, 2.9}) {
    for (std::string_view id : {"g1", "g5"}) {
      const double ref = bilinear_density(left, density_operator(id), right, 0.5, 0.4, 0.0).real();
      for (double phi = 0; phi < 2 * kPi; phi += 0.5) {
        // charge and energy are spherically symmetric
        EXPECT_NEAR(bilinear_density(left, density_operator(id), right, 0.5, theta, phi).real(), ref, 1e-14);
      }
    }
    for (std::string_view id : {"ig2g3", "ig2g3g5"}) {
      const double ref = bilinear_density(left, density_operator(id), right, 0.5, theta, 0.0).real();
      for (double phi = 0; phi < 2 * kPi; phi += 0.5) {
        // spin and magnetization depend on theta only
        EXPECT_NEAR(bilinear_density(left, density_operator(id), right, 0.5, theta, phi).real(), ref, 1e-14);
      }
    }
  }
}

TEST(AngularReduce, EnergyAndSpinRows) {
  const DensityTable e = angular_reduce("E", Particle::electron, 1);
  const auto terms = e.table_terms();
  ASSERT_EQ(terms.size(), 2U);
  EXPECT_EQ(terms[0].radial, "Ff");
  EXPECT_EQ(terms[0].re, make_rational(1, 3));
  EXPECT_EQ(terms[1].re, make_rational(2, 3));
  EXPECT_EQ(terms[1].m, 1);
  EXPECT_NEAR(terms[0].integrated.real(), 1.0 / 3.0, 1e-14);
  ASSERT_EQ(e.terms.size(), 3U);
  EXPECT_EQ(e.terms[2].radial, "Gg");
  EXPECT_EQ(table_entry_text(terms), "1/3*Ff*|Y10|^2 + 2/3*Ff*|Y11|^2");

  const DensityTable sz = angular_reduce("S_z", Particle::electron, 1);
  EXPECT_EQ(table_entry_text(sz.table_terms()), "-1/3*Ff*|Y10|^2 + 2/3*Ff*|Y11|^2");
}

TEST(AngularReduce, PositronChargeIsNegated) {
  const DensityTable pe = angular_reduce("e", Particle::positron, 1);
  EXPECT_EQ(table_entry_text(pe.table_terms()), "-1/3*Kk*|Y10|^2 - 2/3*Kk*|Y11|^2");
  for (const auto& op : density_operators()) {
    for (int tm : {1, -1}) {
      const auto el = angular_reduce(op.id, Particle::electron, tm).table_terms();
      const auto po = angular_reduce(op.id, Particle::positron, tm).table_terms();
      ASSERT_EQ(el.size(), po.size());
      for (std::size_t i = 0; i < el.size(); ++i) {
        // sign flip between the two solutions only in γ5-bearing rows
        EXPECT_EQ(po[i].re, op.has_gamma5 ? -el[i].re : el[i].re) << op.id;
      }
    }
  }
}

TEST(AngularReduce, CrossHarmonicDensitiesVanish) {
  for (const auto& op : density_operators()) {
    for (Particle p : {Particle::electron, Particle::positron}) {
      for (int tm : {1, -1}) {
        EXPECT_LT(angular_reduce(op.id, p, tm).max_cross_integral, 1e-12) << op.id;
      }
    }
  }
}

TEST(AngularReduce, PublishedTablesReproduced) {
  const auto checks = check_density_tables();
  EXPECT_EQ(checks.size(), 16U);
  for (const auto& c : checks) {
    EXPECT_TRUE(c.matched) << to_string(c.printed.particle) << " " << c.printed.row << " "
                           << table_entry_text(c.computed.table_terms());
    for (const auto& t : c.computed.table_terms()) {
      EXPECT_EQ(t.re.get_den(), 3);
      EXPECT_NEAR(t.integrated.real(), t.re.get_d(), 1e-13);
    }
  }
}

TEST(Invariants, SeriesMatchProductDensities) {
  const SolutionFamily first = generate_family(FamilyKind::first, 2);
  const SolutionFamily second = generate_family(FamilyKind::second, 2);
  const InvariantDensities inv = invariants_I1_I2(first, second);
  const LogPolySeries s2 = LogPolySeries::monomial(1, 0, 2);
  EXPECT_EQ(inv.I1 * s2, product_density(first, second, ProductKind::GG).series);
  EXPECT_EQ(inv.I2 * s2, product_density(first, second, ProductKind::FF).series);
  // I1 = G g through the retained order
  const LogPolySeries gg = first.lower_sum() * second.lower_sum();
  EXPECT_EQ(inv.I1, gg.truncate_alpha(product_density(first, second, ProductKind::GG).max_alpha_pow));
}

TEST(Invariants, PointwiseFromBilinears) {
  const double alpha = 0.0073;
  const SolutionFamily first = generate_family(FamilyKind::first, 2);
  const SolutionFamily second = generate_family(FamilyKind::second, 2);
  const BispinorState left = build_bispinor(SolutionKind::first_solution, 1,
                                            series_radial_pair(first, alpha, 0.0, "F", "G"));
  const BispinorState right = build_bispinor(SolutionKind::first_solution, 1,
                                             series_radial_pair(second, alpha, 0.0, "f", "g"));
  for (double s : {0.3, 0.7}) {
    const double G = left.radial.lower(s);
    const double F = left.radial.upper(s);
    const double g = right.radial.lower(s);
    const double f = right.radial.upper(s);
    for (double th : {0.4, 2.0}) {
      EXPECT_NEAR(invariant_density(left, right, false, s, th, 1.0), G * g, 1e-12 * std::abs(G * g));
      EXPECT_NEAR(invariant_density(left, right, true, s, th, 1.0), F * f, 1e-12 * std::abs(F * f));
      const double sum = 4 * kPi * bilinear_density(left, density_operator("g1"), right, s, th, 1.0).real();
      EXPECT_NEAR(invariant_density(left, right, false, s, th, 1.0) + invariant_density(left, right, true, s, th, 1.0),
                  sum, 1e-12 * std::abs(sum));
    }
  }
}

TEST(DensityJson, OperatorRows) {
  const auto checks = check_density_operators();
  const nlohmann::json j = to_json(checks[9]);
  EXPECT_EQ(j["id"], "g2g3g4g5");
  EXPECT_EQ(j["matches_printed"], false);
  EXPECT_EQ(j["survives_volume_integration"], false);
  const nlohmann::json t = to_json(angular_reduce("M_z", Particle::positron, -1));
  EXPECT_EQ(t["terms"][0]["fraction"], "-1/3");
  EXPECT_EQ(t["terms"][1]["fraction"], "2/3");
}

}  // namespace
}  // namespace selfaction
