#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace selfaction {

/// Neumaier (improved Kahan-Babuska) running sum. The result depends only on
/// the order in which terms are added.
template <typename Real>
class CompensatedSum {
 public:
  CompensatedSum& operator+=(Real x) {
    using std::abs;
    const Real t = sum_ + x;
    if (abs(sum_) >= abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  Real value() const { return sum_ + compensation_; }

 private:
  Real sum_ = 0;
  Real compensation_ = 0;
};

/// Pairwise tree reduction over a fixed partition with a compensated leaf
/// sum. The tree shape depends on the length only, so the result is
/// bit-identical however the values were produced.
template <typename Real>
Real tree_sum(std::span<const Real> values) {
  constexpr std::size_t kLeaf = 16;
  if (values.size() <= kLeaf) {
    CompensatedSum<Real> acc;
    for (Real v : values) acc += v;
    return acc.value();
  }
  const std::size_t half = values.size() / 2;
  CompensatedSum<Real> acc;
  acc += tree_sum(values.first(half));
  acc += tree_sum(values.subspan(half));
  return acc.value();
}

}  // namespace selfaction
