#pragma once

#include <stdexcept>

namespace selfaction {

/// Adaptive refinement or an iteration cap ran out before the tolerance was met.
class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No sign change could be found in the requested bracket.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Angular quadrature too coarse to integrate l <= 2 harmonic products exactly.
class QuadratureResolutionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace selfaction
