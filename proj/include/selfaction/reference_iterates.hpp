#pragma once

// Published closed forms of the low-order iterates and product densities,
// embedded as exact rationals so generated series can be diffed against them.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "selfaction/log_poly_series.hpp"
#include "selfaction/series_solver.hpp"

namespace selfaction {

struct ReferenceIterate {
  std::string label;        // e.g. "F1", "g0", "GG[alpha^2]"
  std::string description;
  LogPolySeries expected;
  /// When true only the listed monomials are compared (the reference form is
  /// truncated with an ellipsis).
  bool partial = false;
};

/// F0, G1, F1, G2 of the first family and g0, f1, g1 of the second.
std::vector<ReferenceIterate> reference_iterates();

/// alpha-level brackets of (2/alpha) s^2 G g and (6/alpha) s^2 F f.
std::vector<ReferenceIterate> reference_products();

struct CoefficientMismatch {
  TermKey key;
  Rational expected;
  Rational computed;
};

struct CoefficientCheck {
  std::string label;
  std::string description;
  bool partial = false;
  bool matched = false;
  std::vector<CoefficientMismatch> mismatches;
  LogPolySeries computed;
};

CoefficientCheck compare_coefficients(const ReferenceIterate& ref, const LogPolySeries& computed);

/// Diffs every embedded iterate (and product bracket) against the recursion
/// run to `order`. Items needing more iterations than available are skipped.
std::vector<CoefficientCheck> check_coefficients(int order, bool include_products = true);

nlohmann::json to_json(const CoefficientCheck& check);
std::string to_text(const CoefficientCheck& check);

}  // namespace selfaction
