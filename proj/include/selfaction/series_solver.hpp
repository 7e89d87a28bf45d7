#pragma once

// Iterated series solutions of the reduced radial system
//
//   s^-2 d/ds (s^2 F) =  (1 - 1/s) alpha G
//          -d/ds G    =  (1 - 1/s) alpha F
//
// Each step integrates one equation and fixes the integration constant so the
// new part vanishes at s = 1. The first family starts from G0 = 1, the second
// from f0 = s^-2. The damping factor exp(-beta/s) is not part of these series;
// it is applied at evaluation and integration time.

#include <stdexcept>
#include <string_view>
#include <vector>

#include "selfaction/log_poly_series.hpp"

namespace selfaction {

enum class FamilyKind { first, second };

std::string_view to_string(FamilyKind kind);

/// Iterates of one independent solution. `upper` holds F_k (first) or f_k
/// (second); `lower` holds G_k or g_k. Both lists have order + 1 entries.
struct SolutionFamily {
  FamilyKind kind = FamilyKind::first;
  std::vector<LogPolySeries> upper;
  std::vector<LogPolySeries> lower;
  int order = 0;
  /// gamma = E/mc^2 of the damping substitution; interior work uses 1.
  double gamma = 1.0;

  LogPolySeries upper_sum() const;
  LogPolySeries lower_sum() const;
};

class OrderMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// F = s^-2 [ integral(s^2 (1 - 1/s) alpha G) + C ], C so that F(1) = 0.
LogPolySeries f_step(const LogPolySeries& lower);

/// G = -integral((1 - 1/s) alpha F) + C, C so that G(1) = 0.
LogPolySeries g_step(const LogPolySeries& upper);

SolutionFamily generate_family(FamilyKind kind, int order);

enum class ProductKind { GG, FF };

/// s^2 G g (GG) or s^2 F f (FF), truncated at the highest alpha power that is
/// complete in both families.
struct ProductDensity {
  ProductKind kind = ProductKind::GG;
  LogPolySeries series;
  int max_alpha_pow = 0;
  /// Lowest alpha power dropped by the truncation.
  int first_discarded_alpha_pow = 0;

  /// (2/alpha) s^2 G g or (6/alpha) s^2 F f; alpha exponents start at 0.
  LogPolySeries normalized() const;
};

/// `level` selects how many alpha^2 corrections to keep beyond the leading
/// term (-1 keeps everything the families support).
ProductDensity product_density(const SolutionFamily& first, const SolutionFamily& second,
                               ProductKind which, int level = -1);

/// Residuals of the two radial equations for the truncated sums of a family.
struct RadialResidual {
  LogPolySeries upper_equation;
  LogPolySeries lower_equation;
};

RadialResidual radial_residual(const SolutionFamily& family);

enum class ExternalBranch { Gf_branch, fg_branch };

/// Closed-form solutions beyond the classical radius (s >= 1):
///   G = exp(-beta/s), F = 0   and   f = s^-2 exp(-beta/s), g = 0.
class ExternalSolution {
 public:
  explicit ExternalSolution(double beta);

  double beta() const { return beta_; }

  double G(double s) const;
  double F(double s) const;
  double f(double s) const;
  double g(double s) const;

  /// G g + F f, identically zero outside.
  double product(double s) const;

 private:
  void check(double s) const;

  double beta_;
};

ExternalSolution external_solution(double beta);

}  // namespace selfaction
