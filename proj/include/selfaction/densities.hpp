#pragma once

// Four-component states built from two radial functions and spherical
// harmonics, the sixteen bilinear densities psi_L^† Γ psi_R, and their
// angular reduction.
//
// Gamma matrices: γ1 = γ_t = 1, γ2 = γ_x, γ3 = γ_y, γ4 = γ_z (off-diagonal
// blocks), γ5 = diag(1, 1, −1, −1). Harmonics use the Condon–Shortley phase.

#include <array>
#include <complex>
#include <functional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "selfaction/log_poly_series.hpp"
#include "selfaction/series_solver.hpp"

namespace selfaction {

using Complex = std::complex<double>;

enum class GammaIndex { g1 = 1, g2, g3, g4, g5 };

const Eigen::Matrix4cd& gamma_matrix(GammaIndex which);

/// Y_{l,m}(θ, φ). Closed forms for l <= 2, std::sph_legendre otherwise.
/// Throws std::domain_error for l < 0 or |m| > l.
Complex spherical_harmonic(int l, int m, double theta, double phi);

enum class SolutionKind { first_solution, second_solution };
enum class Particle { electron, positron };

std::string_view to_string(SolutionKind kind);
std::string_view to_string(Particle particle);

/// Radial evaluators for the Y_{j+1/2} part (upper: F, f, K, k) and the
/// Y_{j−1/2} part (lower: G, g, L, l), with their display tags.
struct RadialPair {
  std::string upper_tag;
  std::string lower_tag;
  std::function<double(double)> upper;
  std::function<double(double)> lower;
};

/// Truncated sums of a family, optionally damped by exp(−beta/s).
RadialPair series_radial_pair(const SolutionFamily& family, double alpha, double beta, std::string upper_tag,
                              std::string lower_tag);

/// One component: phase · sqrt(weight) · radial(s) · Y_{l,m}. Components
/// whose weight vanishes are absent.
struct ComponentSpec {
  bool present = false;
  Complex phase{1.0, 0.0};
  Rational weight;
  bool upper = true;
  int l = 0;
  int m = 0;
};

struct BispinorState {
  SolutionKind kind = SolutionKind::first_solution;
  int twice_j = 1;
  int twice_m = 1;
  RadialPair radial;
  std::array<ComponentSpec, 4> spec;

  Eigen::Vector4cd components(double s, double theta, double phi) const;
};

/// Assembles the components with the general-j prefactors
/// [(j+1∓m)/(2(j+1))]^{1/2} and [(j±m)/(2j)]^{1/2}; the second and fourth
/// components of the first and second solutions carry their printed minus sign.
BispinorState build_bispinor(SolutionKind kind, int twice_m, RadialPair radial, int twice_j = 1);

/// One of the sixteen operators, with the density printed for it.
struct DensityOperator {
  std::string id;
  std::string label;
  /// Physical name where one is given (Energy, S_z, Charge e, M_z).
  std::string name;
  Eigen::Matrix4cd matrix;
  /// Published density as coefficients of psi_a^* psi_b.
  Eigen::Matrix4cd printed;
  std::string printed_text;
  bool has_gamma5 = false;
};

const std::vector<DensityOperator>& density_operators();
/// Throws std::invalid_argument for unknown ids. Ids: g1, g2, g3, g4,
/// g2g3g4, ig3g4, ig4g2, ig2g3, g5, g2g3g4g5, ig3g4g5, ig4g2g5, ig2g3g5,
/// ig2g5, ig3g5, ig4g5; aliases E, S_z, e, M_z.
const DensityOperator& density_operator(std::string_view id);

/// "i(−1·3 − 2·4 + 3·1 + 4·2)" style rendering of a coefficient matrix.
std::string density_text(const Eigen::Matrix4cd& coefficients);

Complex bilinear_density(const BispinorState& left, const DensityOperator& op, const BispinorState& right,
                         double s, double theta, double phi);

struct AngularQuadrature {
  /// Gauss–Legendre nodes in cos θ.
  int theta_nodes = 8;
  /// Uniform trapezoid nodes in φ.
  int phi_nodes = 16;
};

/// ∫ f dΩ; throws QuadratureResolutionError below 3 × 5 nodes, the minimum
/// that integrates l <= 2 harmonic products exactly.
Complex integrate_sphere(const std::function<Complex(double, double)>& f, const AngularQuadrature& quad = {});

/// coefficient · radial product · |Y_{l,m}|²
struct AngularTerm {
  std::string radial;
  bool upper = true;
  int l = 0;
  int m = 0;
  Rational re;
  Rational im;
  /// Sphere integral of coefficient · |Y_{l,m}|² by quadrature.
  Complex integrated;
};

struct DensityTable {
  std::string operator_id;
  Particle particle = Particle::electron;
  int twice_m = 1;
  /// Same-harmonic terms, upper products (Ff, Kk) first.
  std::vector<AngularTerm> terms;
  /// Largest |∫ dΩ| over products of different harmonics.
  double max_cross_integral = 0;

  /// Terms as listed in the electron/positron tables (upper products only).
  std::vector<AngularTerm> table_terms() const;
  bool survives() const;
};

/// Electron: left/right are first solutions with (F, G) and (f, g); positron:
/// second solutions with (K, L) and (k, l). Radial values do not enter.
DensityTable angular_reduce(std::string_view operator_id, Particle particle, int twice_m,
                            const AngularQuadrature& quad = {});

/// "-1/3*Ff*|Y10|^2 + 2/3*Ff*|Y11|^2"
std::string table_entry_text(const std::vector<AngularTerm>& terms);

struct PrintedTableEntry {
  Particle particle;
  std::string row;
  int twice_m;
  /// (fraction, l, m) for the upper product
  std::vector<std::tuple<Rational, int, int>> terms;
};

/// The electron and positron tables as printed.
const std::vector<PrintedTableEntry>& printed_density_tables();

struct TableCheck {
  PrintedTableEntry printed;
  DensityTable computed;
  bool matched = false;
};

std::vector<TableCheck> check_density_tables(const AngularQuadrature& quad = {});

struct OperatorCheck {
  const DensityOperator* op = nullptr;
  Eigen::Matrix4cd computed;
  bool matches_printed = false;
  /// Survives volume integration for the electron at m = 1/2.
  bool survives = false;
};

std::vector<OperatorCheck> check_density_operators();

nlohmann::json to_json(const DensityTable& table);
nlohmann::json to_json(const OperatorCheck& check);

/// I₁ = G g and I₂ = F f as exact series, truncated like product_density
/// (so s² I₁ equals the GG product series).
struct InvariantDensities {
  LogPolySeries I1;
  LogPolySeries I2;
};

InvariantDensities invariants_I1_I2(const SolutionFamily& first, const SolutionFamily& second);

/// 2π(u_μ ψ^†γ_μ ψ ∓ ψ^†γ5 ψ) at a point with u = (1, 0, 0, 0); minus gives
/// I₁, plus gives I₂.
double invariant_density(const BispinorState& left, const BispinorState& right, bool second_invariant, double s,
                         double theta, double phi);

}  // namespace selfaction
