#include "selfaction/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "selfaction/errors.hpp"
#include "selfaction/log_poly_series.hpp"
#include "selfaction/parallel.hpp"
#include "selfaction/root_finding.hpp"

namespace selfaction {

namespace {

using State = std::array<long double, 2>;

constexpr double kRelativeFloor = 1e-30;

State reduced_rhs(long double alpha, long double s, const State& y) {
  const long double c = (1 - 1 / s) * alpha;
  return {-2 * y[0] / s + c * y[1], -c * y[0]};
}

State initial_state(FamilyKind kind) { return kind == FamilyKind::first ? State{0, 1} : State{1, 0}; }

OdeOptions<long double> ode_options(double tol) {
  if (!(tol > 0)) throw std::domain_error("integrate_ode: tol must be positive");
  OdeOptions<long double> opt;
  opt.rel_tol = tol;
  opt.abs_tol = tol * 1e-16;
  return opt;
}

Trajectory empty_trajectory(double alpha, FamilyKind kind, const OdeOptions<long double>& opt) {
  Trajectory t;
  t.alpha = alpha;
  t.kind = kind;
  t.rel_tol = static_cast<double>(opt.rel_tol);
  t.abs_tol = static_cast<double>(opt.abs_tol);
  t.direction = Direction::inward;
  return t;
}

}  // namespace

Trajectory integrate_ode(double alpha, FamilyKind kind, double s_stop, double tol) {
  if (!(s_stop > 0 && s_stop < 1)) throw std::domain_error("integrate_ode: s_stop must lie in (0, 1)");
  const OdeOptions<long double> opt = ode_options(tol);
  Trajectory out = empty_trajectory(alpha, kind, opt);
  const State y0 = initial_state(kind);
  out.samples.push_back({1.0, static_cast<double>(y0[0]), static_cast<double>(y0[1])});
  const long double stop = s_stop;
  const long double a = alpha;
  out.stats = integrate_dormand_prince<long double, 2>(
      [a](long double s, const State& y) { return reduced_rhs(a, s, y); }, 1.0L, y0,
      std::span<const long double>(&stop, 1),
      [&out](long double s, const State& y) {
        out.samples.push_back({static_cast<double>(s), static_cast<double>(y[0]), static_cast<double>(y[1])});
      },
      opt);
  return out;
}

Trajectory integrate_ode_on_grid(double alpha, FamilyKind kind, std::span<const double> grid, double tol) {
  if (grid.empty()) throw std::invalid_argument("integrate_ode_on_grid: empty grid");
  std::vector<long double> points(grid.begin(), grid.end());
  for (long double s : points) {
    if (!(s > 0 && s <= 1)) throw std::domain_error("integrate_ode_on_grid: grid points must lie in (0, 1]");
  }
  std::sort(points.begin(), points.end(), std::greater<>());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  const OdeOptions<long double> opt = ode_options(tol);
  Trajectory out = empty_trajectory(alpha, kind, opt);
  std::size_t next = 0;
  const long double a = alpha;
  out.stats = integrate_dormand_prince<long double, 2>(
      [a](long double s, const State& y) { return reduced_rhs(a, s, y); }, 1.0L, initial_state(kind),
      std::span<const long double>(points),
      [&](long double s, const State& y) {
        if (next < points.size() && s == points[next]) {
          out.samples.push_back({static_cast<double>(s), static_cast<double>(y[0]), static_cast<double>(y[1])});
          ++next;
        }
      },
      opt);
  return out;
}

std::vector<std::pair<double, double>> scaled_wronskian(const Trajectory& first, const Trajectory& second) {
  if (first.samples.size() != second.samples.size()) {
    throw std::invalid_argument("scaled_wronskian: trajectories sampled differently");
  }
  std::vector<std::pair<double, double>> out;
  out.reserve(first.samples.size());
  for (std::size_t i = 0; i < first.samples.size(); ++i) {
    const TrajectorySample& a = first.samples[i];
    const TrajectorySample& b = second.samples[i];
    if (a.s != b.s) throw std::invalid_argument("scaled_wronskian: trajectories sampled differently");
    out.emplace_back(a.s, a.s * a.s * (a.upper * b.lower - a.lower * b.upper));
  }
  return out;
}

std::vector<double> default_comparison_grid() {
  constexpr int n = 64;
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = 0.2 + (0.99 - 0.2) * i / (n - 1);
  return grid;
}

ComparisonReport compare_series_ode(int order, double alpha, std::span<const double> grid, double tol) {
  if (order < 0) throw std::invalid_argument("compare_series_ode: order must be non-negative");
  if (grid.empty()) throw std::invalid_argument("compare_series_ode: empty grid");
  for (double s : grid) {
    if (!(s >= 0.1 && s <= 0.99)) throw std::domain_error("compare_series_ode: grid points must lie in [0.1, 0.99]");
  }
  const std::array<FamilyKind, 2> kinds{FamilyKind::first, FamilyKind::second};
  const std::vector<Trajectory> trajectories = parallel_map<Trajectory>(
      kinds.size(), [&](std::size_t i) { return integrate_ode_on_grid(alpha, kinds[i], grid, tol); });

  ComparisonReport report;
  report.order = order;
  report.alpha = alpha;
  const long double a = alpha;
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    const SolutionFamily fam = generate_family(kinds[k], order);
    const LogPolySeries upper = fam.upper_sum();
    const LogPolySeries lower = fam.lower_sum();
    const bool first = kinds[k] == FamilyKind::first;
    for (const TrajectorySample& p : trajectories[k].samples) {
      const long double s = p.s;
      const std::array<std::pair<std::string, std::pair<double, double>>, 2> values{{
          {first ? "F" : "f", {static_cast<double>(eval_numeric<long double>(upper, s, a)), p.upper}},
          {first ? "G" : "g", {static_cast<double>(eval_numeric<long double>(lower, s, a)), p.lower}},
      }};
      for (const auto& [name, v] : values) {
        const double err = std::abs(v.first - v.second) / std::max(std::abs(v.second), kRelativeFloor);
        report.points.push_back({p.s, name, v.first, v.second, err});
        report.max_rel_error = std::max(report.max_rel_error, err);
      }
    }
  }
  return report;
}

ComparisonReport compare_series_ode(int order, double alpha) {
  const std::vector<double> grid = default_comparison_grid();
  return compare_series_ode(order, alpha, grid);
}

ContinuityReport continuity_check(double alpha, double beta, int order) {
  if (!(alpha > 0 && beta > 0)) throw std::domain_error("continuity_check: alpha and beta must be positive");
  const SolutionFamily first = generate_family(FamilyKind::first, order);
  const SolutionFamily second = generate_family(FamilyKind::second, order);
  const double damping = std::exp(-beta);
  auto interior = [&](const LogPolySeries& series) { return eval_numeric<double>(series, 1.0, alpha) * damping; };
  const ExternalSolution ext(beta);

  ContinuityReport r;
  r.alpha = alpha;
  r.beta = beta;
  r.gaps = {{{"G", interior(first.lower_sum()), ext.G(1.0), 0},
             {"F", interior(first.upper_sum()), ext.F(1.0), 0},
             {"f", interior(second.upper_sum()), ext.f(1.0), 0},
             {"g", interior(second.lower_sum()), ext.g(1.0), 0}}};
  for (ContinuityGap& g : r.gaps) {
    g.gap = std::abs(g.interior - g.exterior);
    r.max_gap = std::max(r.max_gap, g.gap);
  }
  for (int i = 1; i <= 900; ++i) {
    r.max_exterior_product = std::max(r.max_exterior_product, std::abs(ext.product(1.0 + i * 0.01)));
  }
  return r;
}

Fig1Data fig1_data(double alpha, double beta, int n_samples, int order) {
  if (n_samples < 2) throw std::invalid_argument("fig1_data: need at least 2 samples");
  if (!(alpha > 0 && beta > 0)) throw std::domain_error("fig1_data: alpha and beta must be positive");
  const SolutionFamily first = generate_family(FamilyKind::first, order);
  const SolutionFamily second = generate_family(FamilyKind::second, order);
  const LogPolySeries F = first.upper_sum();
  const LogPolySeries G = first.lower_sum();
  const LogPolySeries f = second.upper_sum();
  const LogPolySeries g = second.lower_sum();
  const ExternalSolution ext(beta);

  Fig1Data out;
  out.alpha = alpha;
  out.beta = beta;
  const double lo = std::log(beta * 1e-3);
  const double hi = std::log(1.2);
  out.rows = parallel_map<Fig1Row>(static_cast<std::size_t>(n_samples), [&](std::size_t i) {
    const double s = i + 1 == static_cast<std::size_t>(n_samples)
                         ? 1.2
                         : std::exp(lo + (hi - lo) * static_cast<double>(i) / (n_samples - 1));
    Fig1Row row;
    row.s = s;
    if (s <= 1.0) {
      const double w = std::exp(-beta / s);
      row.F = eval_numeric<double>(F, s, alpha) * w;
      row.G = eval_numeric<double>(G, s, alpha) * w;
      row.f = eval_numeric<double>(f, s, alpha) * w;
      row.g = eval_numeric<double>(g, s, alpha) * w;
    } else {
      row.F = ext.F(s);
      row.G = ext.G(s);
      row.f = ext.f(s);
      row.g = ext.g(s);
    }
    row.Gg = row.G * row.g;
    row.Ff = row.F * row.f;
    return row;
  });

  // the damping factor is positive, so the zeros are those of the bare sum
  auto bare_G = [&](double s) { return eval_numeric<double>(G, s, alpha); };
  for (std::size_t i = 0; i + 1 < out.rows.size(); ++i) {
    const double a = out.rows[i].s;
    const double b = out.rows[i + 1].s;
    if (b > 1.0) break;
    if ((bare_G(a) < 0) != (bare_G(b) < 0)) {
      out.g_zeros.push_back(bracketed_root<double>(bare_G, a, b, a * 1e-14).root);
    }
  }
  return out;
}

std::string fig1_csv(const Fig1Data& data, int digits) {
  std::ostringstream os;
  os.precision(digits);
  // underflowed damping leaves signed zeros; print them unsigned
  auto v = [](double x) { return x == 0 ? 0.0 : x; };
  os << "s,F,G,f,g,Gg,Ff\n";
  for (const Fig1Row& r : data.rows) {
    os << r.s << ',' << v(r.F) << ',' << v(r.G) << ',' << v(r.f) << ',' << v(r.g) << ',' << v(r.Gg) << ','
       << v(r.Ff) << '\n';
  }
  return os.str();
}

LaplacianCheck laplacian_ndim(int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("laplacian_ndim: n must be at least 2");
  LaplacianCheck out;
  out.n = n;
  out.coefficient = 3.0 - n;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<long double> x(static_cast<std::size_t>(n));
  long double norm = 0;
  for (auto& xi : x) {
    xi = normal(rng);
    norm += xi * xi;
  }
  norm = std::sqrt(norm);
  for (auto& xi : x) xi /= norm;

  auto inv_r = [](const std::vector<long double>& p) {
    long double r2 = 0;
    for (long double v : p) r2 += v * v;
    return 1 / std::sqrt(r2);
  };
  // Σ second central differences, then one Richardson step h → h/2
  auto second_difference = [&](long double h) {
    const long double centre = inv_r(x);
    long double total = 0;
    std::vector<long double> p = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
      p[i] = x[i] + h;
      const long double up = inv_r(p);
      p[i] = x[i] - h;
      const long double down = inv_r(p);
      p[i] = x[i];
      total += (up - 2 * centre + down) / (h * h);
    }
    return total;
  };
  const long double h = 1e-4L;
  const long double d1 = second_difference(h);
  const long double d2 = second_difference(h / 2);
  out.finite_difference = static_cast<double>((4 * d2 - d1) / 3);
  out.relative_error = std::abs(out.finite_difference - out.coefficient) / std::max(std::abs(out.coefficient), 1.0);
  out.point.assign(x.begin(), x.end());
  return out;
}

nlohmann::json to_json(const ComparisonReport& report) {
  nlohmann::json points = nlohmann::json::array();
  for (const ComparisonPoint& p : report.points) {
    points.push_back({{"s", p.s}, {"component", p.component}, {"series", p.series}, {"ode", p.ode},
                      {"rel_error", p.rel_error}});
  }
  return {{"order", report.order}, {"alpha", report.alpha}, {"max_rel_error", report.max_rel_error},
          {"points", points}};
}

nlohmann::json to_json(const ContinuityReport& report) {
  nlohmann::json gaps = nlohmann::json::array();
  for (const ContinuityGap& g : report.gaps) {
    gaps.push_back({{"name", g.name}, {"interior", g.interior}, {"exterior", g.exterior}, {"gap", g.gap}});
  }
  return {{"alpha", report.alpha},
          {"beta", report.beta},
          {"gaps", gaps},
          {"max_gap", report.max_gap},
          {"max_exterior_product", report.max_exterior_product}};
}

nlohmann::json to_json(const LaplacianCheck& check) {
  return {{"n", check.n},
          {"coefficient", check.coefficient},
          {"finite_difference", check.finite_difference},
          {"relative_error", check.relative_error},
          {"point", check.point}};
}

}  // namespace selfaction
