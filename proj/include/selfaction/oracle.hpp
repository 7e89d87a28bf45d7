#pragma once

// Independent checks: direct integration of the reduced radial system, the
// matching at s = 1, radial profile samples and the n-dimensional Laplacian of
// 1/r.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "selfaction/ode.hpp"
#include "selfaction/series_solver.hpp"

namespace selfaction {

enum class Direction { inward, outward };

struct TrajectorySample {
  double s = 0;
  /// F̃ or f̃
  double upper = 0;
  /// G̃ or g̃
  double lower = 0;
};

struct Trajectory {
  double alpha = 0;
  FamilyKind kind = FamilyKind::first;
  std::vector<TrajectorySample> samples;
  double rel_tol = 0;
  double abs_tol = 0;
  Direction direction = Direction::inward;
  OdeStats stats;
};

/// F' = −2F/s + (1 − 1/s) α G,  G' = −(1 − 1/s) α F, integrated from s = 1
/// with (0, 1) for the first kind and (1, 0) for the second. Samples every
/// accepted step down to s_stop. Integration runs in long double.
Trajectory integrate_ode(double alpha, FamilyKind kind, double s_stop, double tol = 1e-14);

/// Same system sampled exactly at the points of `grid` (any order, all in (0, 1]).
Trajectory integrate_ode_on_grid(double alpha, FamilyKind kind, std::span<const double> grid, double tol = 1e-14);

/// s² (F g − G f) at each common sample; exactly −1 for the true solutions.
std::vector<std::pair<double, double>> scaled_wronskian(const Trajectory& first, const Trajectory& second);

struct ComparisonPoint {
  double s = 0;
  std::string component;
  double series = 0;
  double ode = 0;
  double rel_error = 0;
};

struct ComparisonReport {
  int order = 0;
  double alpha = 0;
  double max_rel_error = 0;
  std::vector<ComparisonPoint> points;
};

/// 64 points evenly spaced over [0.2, 0.99].
std::vector<double> default_comparison_grid();

/// max over grid and all four components of |series − ode| / max(|ode|, 1e−30).
/// Grid points must lie in [0.1, 0.99].
ComparisonReport compare_series_ode(int order, double alpha, std::span<const double> grid,
                                    double tol = 1e-14);
ComparisonReport compare_series_ode(int order, double alpha);

struct ContinuityGap {
  std::string name;
  double interior = 0;
  double exterior = 0;
  double gap = 0;
};

struct ContinuityReport {
  double alpha = 0;
  double beta = 0;
  std::array<ContinuityGap, 4> gaps;
  double max_gap = 0;
  /// max |G g + F f| of the exterior solution sampled over (1, 10].
  double max_exterior_product = 0;
};

/// Interior series × exp(−β/s) (γ = 1) against the exterior forms at s = 1.
ContinuityReport continuity_check(double alpha, double beta, int order = 2);

struct Fig1Row {
  double s = 0;
  double F = 0;
  double G = 0;
  double f = 0;
  double g = 0;
  double Gg = 0;
  double Ff = 0;
};

struct Fig1Data {
  double alpha = 0;
  double beta = 0;
  std::vector<Fig1Row> rows;
  /// Zeros of G refined from sign changes on the grid.
  std::vector<double> g_zeros;
};

/// Log-spaced grid from β/1000 to 1.2; damped series inside s = 1, exterior
/// forms beyond.
Fig1Data fig1_data(double alpha, double beta, int n_samples, int order = 2);

/// Header "s,F,G,f,g,Gg,Ff" followed by one line per row.
std::string fig1_csv(const Fig1Data& data, int digits = 12);

struct LaplacianCheck {
  int n = 0;
  /// c(n) in ∇²(1/r) = c(n) r⁻³
  double coefficient = 0;
  double finite_difference = 0;
  /// |finite_difference − coefficient| / max(|coefficient|, 1)
  double relative_error = 0;
  std::vector<double> point;
};

/// c(n) = 3 − n, with a central-difference check at a random unit point.
LaplacianCheck laplacian_ndim(int n, std::uint64_t seed = 1);

nlohmann::json to_json(const ComparisonReport& report);
nlohmann::json to_json(const ContinuityReport& report);
nlohmann::json to_json(const LaplacianCheck& check);

}  // namespace selfaction
