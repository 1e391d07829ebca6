#include "depfi/shapley.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace depfi {

namespace {

/// Binomial coefficient, exact in int64 for m <= 20.
std::int64_t binomial(std::size_t n, std::size_t k) {
  if (k > n - k) k = n - k;
  std::int64_t result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    result = result * static_cast<std::int64_t>(n - k + i) /
             static_cast<std::int64_t>(i);
  }
  return result;
}

std::vector<double> weights_by_size(std::size_t m) {
  std::vector<double> w(m);
  for (std::size_t s = 0; s < m; ++s) w[s] = shapley_weight(s, m);
  return w;
}

SubsetDependencyCache fill_cache(const DiscreteDataset& ds) {
  SubsetDependencyCache cache;
  cache.feature_count = ds.feature_count();
  const std::size_t subsets = std::size_t{1} << ds.feature_count();
  cache.entries.resize(subsets);
  cache.entries[0] = dep(ds, 0);  // also rejects a constant target
  for (std::uint64_t mask = 1; mask < subsets; ++mask) {
    cache.entries[mask] = dep(ds, mask);
  }
  return cache;
}

FiResult make_result(const DiscreteDataset& ds, SubsetDependencyCache cache,
                     std::vector<double> importances) {
  FiResult result;
  result.total_dependency = cache.entries.back();
  result.cache = std::move(cache);
  result.importances = std::move(importances);
  result.feature_names = ds.feature_names();
  return result;
}

}  // namespace

double shapley_weight(std::size_t subset_size, std::size_t m) {
  if (m < 1 || subset_size >= m) {
    throw InvalidSize("subset size " + std::to_string(subset_size) +
                      " is not in 0.." + std::to_string(m) + "-1");
  }
  if (m <= 20) {
    // size!*(m-size-1)!/m! == 1/(m * C(m-1, size)); both factors are exact.
    return 1.0 / (static_cast<double>(m) *
                  static_cast<double>(binomial(m - 1, subset_size)));
  }
  const double s = static_cast<double>(subset_size);
  const double mf = static_cast<double>(m);
  return std::exp(std::lgamma(s + 1.0) + std::lgamma(mf - s) -
                  std::lgamma(mf + 1.0));
}

FiResult compute_fi(const DiscreteDataset& ds, std::size_t max_features) {
  const std::size_t m = ds.feature_count();
  if (m > max_features || m > 63) {
    throw TooManyFeatures(std::to_string(m) +
                          " features exceed the exact-computation cap of " +
                          std::to_string(std::min<std::size_t>(max_features, 63)));
  }

  SubsetDependencyCache cache = fill_cache(ds);
  std::vector<long double> acc(m, 0.0L);
  if (m > 0) {
    const std::vector<double> w = weights_by_size(m);
    const std::uint64_t subsets = std::uint64_t{1} << m;
    for (std::uint64_t mask = 0; mask < subsets; ++mask) {
      const double base = cache.entries[mask];
      const double weight = w[static_cast<std::size_t>(std::popcount(mask))];
      for (std::size_t i = 0; i < m; ++i) {
        if (mask >> i & 1) continue;
        acc[i] += static_cast<long double>(weight) *
                  (cache.entries[mask | (std::uint64_t{1} << i)] - base);
      }
    }
  }
  std::vector<double> importances(m);
  for (std::size_t i = 0; i < m; ++i) {
    importances[i] = static_cast<double>(acc[i]);
  }
  return make_result(ds, std::move(cache), std::move(importances));
}

FiResult oracle_fi(const DiscreteDataset& ds) {
  const std::size_t m = ds.feature_count();
  if (m > 8) {
    throw TooManyFeatures("ordering enumeration is capped at 8 features, got " +
                          std::to_string(m));
  }

  SubsetDependencyCache cache = fill_cache(ds);
  std::vector<long double> acc(m, 0.0L);
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::uint64_t orderings = 0;
  do {
    ++orderings;
    std::uint64_t mask = 0;
    double previous = cache.entries[0];
    for (std::size_t i : order) {
      mask |= std::uint64_t{1} << i;
      const double current = cache.entries[mask];
      acc[i] += static_cast<long double>(current - previous);
      previous = current;
    }
  } while (std::next_permutation(order.begin(), order.end()));

  std::vector<double> importances(m);
  for (std::size_t i = 0; i < m; ++i) {
    importances[i] =
        static_cast<double>(acc[i] / static_cast<long double>(orderings));
  }
  return make_result(ds, std::move(cache), std::move(importances));
}

std::uint64_t best_subset(const SubsetDependencyCache& cache, std::size_t k) {
  if (!cache.complete()) {
    throw IncompleteCache("cache does not cover all subsets");
  }
  if (k < 1 || k > cache.feature_count) {
    throw InvalidK("k must be in 1.." + std::to_string(cache.feature_count));
  }
  std::uint64_t best_mask = 0;
  double best_value = -1.0;
  const std::uint64_t subsets = std::uint64_t{1} << cache.feature_count;
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != k) continue;
    if (cache.entries[mask] > best_value) {  // ties keep the lowest mask
      best_value = cache.entries[mask];
      best_mask = mask;
    }
  }
  return best_mask;
}

FiResult fi_for_model_predictions(const DiscreteDataset& ds,
                                  const Column& predictions,
                                  std::size_t max_features) {
  if (predictions.codes.size() != ds.n_samples()) {
    throw LengthMismatch("predictions have " +
                         std::to_string(predictions.codes.size()) +
                         " rows, dataset has " +
                         std::to_string(ds.n_samples()));
  }
  return compute_fi(DiscreteDataset(ds.features(), predictions), max_features);
}

}  // namespace depfi
