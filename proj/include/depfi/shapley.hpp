#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "depfi/dataset.hpp"
#include "depfi/dependency.hpp"

namespace depfi {

/// Dependency of every feature subset, indexed by bitmask. Entry order is
/// increasing mask, so entries[mask] is the subset's value.
struct SubsetDependencyCache {
  std::vector<double> entries;
  std::size_t feature_count = 0;

  bool complete() const {
    return feature_count < 64 &&
           entries.size() == (std::size_t{1} << feature_count);
  }
  double at(std::uint64_t mask) const { return entries.at(mask); }
};

/// Importance vector with its provenance. importances sums to
/// total_dependency (the full feature set's dependency); each entry lies in
/// [0, 1] and is at least dep({i})/m.
struct FiResult {
  std::vector<double> importances;
  double total_dependency = 0.0;
  SubsetDependencyCache cache;
  std::vector<std::string> feature_names;
};

/// Features beyond this need an explicit cap override; cost doubles per
/// feature.
inline constexpr std::size_t kDefaultFeatureCap = 20;

/// Weight of one subset size in the ordering average:
/// size! * (m - size - 1)! / m!. Exact factorial ratio up to m = 20,
/// log-gamma beyond. Throws InvalidSize unless 0 <= size < m.
double shapley_weight(std::size_t subset_size, std::size_t m);

/// Exact importance of every feature: fills the cache with all 2^m subset
/// dependencies, then averages each feature's marginal gain over subsets with
/// the ordering weights. Throws DependencyUndefined (constant target) and
/// TooManyFeatures (feature count above max_features).
FiResult compute_fi(const DiscreteDataset& ds,
                    std::size_t max_features = kDefaultFeatureCap);

/// Brute-force reference: enumerates all m! feature orderings and averages
/// each feature's marginal dependency gain. Agrees with compute_fi to within
/// accumulated rounding. Throws TooManyFeatures above 8 features.
FiResult oracle_fi(const DiscreteDataset& ds);

/// The size-k subset with maximal dependency; ties resolve to the lowest
/// bitmask. Throws IncompleteCache and InvalidK.
std::uint64_t best_subset(const SubsetDependencyCache& cache, std::size_t k);

/// compute_fi with the target column swapped for a prediction column, for
/// explaining a model instead of the data. Throws LengthMismatch and
/// DependencyUndefined.
FiResult fi_for_model_predictions(const DiscreteDataset& ds,
                                  const Column& predictions,
                                  std::size_t max_features = kDefaultFeatureCap);

}  // namespace depfi
