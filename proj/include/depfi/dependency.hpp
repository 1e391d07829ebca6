#pragma once

#include <cstdint>

#include "depfi/dataset.hpp"

namespace depfi {

/// One evaluated dependency ratio. value equals ud_numerator/ud_denominator
/// and lies in [0, 1].
struct DependencyValue {
  double value = 0.0;
  std::uint64_t subset = 0;     // feature bitmask, bit i = feature i
  double ud_numerator = 0.0;    // deviation of Y's law conditioned on the subset
  double ud_denominator = 0.0;  // deviation of Y's law conditioned on itself
};

/// Mean total deviation of the target's conditional distribution from its
/// marginal, where the condition is the joint value of the subset's columns:
/// sum_x p(x) * sum_y |p(y|x) - p(y)| over empirical frequencies.
/// The empty subset yields 0.
double ud(const DiscreteDataset& ds, std::uint64_t subset_mask);

/// The same deviation with the target conditioned on itself; this is the
/// largest value any conditioning can reach. Zero iff the target is constant.
double ud_self(const DiscreteDataset& ds);

/// Normalized dependency ud(subset)/ud_self in [0, 1]. Monotone nondecreasing
/// under subset inclusion. Throws DependencyUndefined for a constant target.
double dep(const DiscreteDataset& ds, std::uint64_t subset_mask);

/// dep plus the ratio's parts. Throws DependencyUndefined.
DependencyValue dep_detail(const DiscreteDataset& ds,
                           std::uint64_t subset_mask);

}  // namespace depfi
