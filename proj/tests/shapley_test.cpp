#include "depfi/shapley.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

#include <doctest.h>

#include "depfi/catalog.hpp"
#include "depfi/dataset.hpp"
#include "depfi/errors.hpp"

namespace {

using depfi::DiscreteDataset;
using depfi::FiResult;
using depfi::SyntheticSpec;

DiscreteDataset xor_pair() {
  SyntheticSpec spec;
  spec.column_names = {"X1", "X2", "Y"};
  for (long long x1 = 0; x1 <= 1; ++x1) {
    for (long long x2 = 0; x2 <= 1; ++x2) {
      spec.outcome_table.push_back({{x1, x2, x1 ^ x2}, {1, 4}});
    }
  }
  spec.total_samples = 4;
  return depfi::materialize(spec);
}

DiscreteDataset wide_dataset(std::size_t feature_count) {
  SyntheticSpec spec;
  for (std::size_t i = 0; i < feature_count; ++i) {
    spec.column_names.push_back("X" + std::to_string(i));
  }
  spec.column_names.push_back("Y");
  const std::vector<long long> zeros(feature_count + 1, 0);
  const std::vector<long long> ones(feature_count + 1, 1);
  spec.outcome_table = {{zeros, {1, 2}}, {ones, {1, 2}}};
  spec.total_samples = 2;
  return depfi::materialize(spec);
}

}  // namespace

TEST_CASE("ordering weights are exact factorial ratios") {
  CHECK(depfi::shapley_weight(0, 3) == 1.0 / 3);
  CHECK(depfi::shapley_weight(1, 3) == 1.0 / 6);
  CHECK(depfi::shapley_weight(2, 3) == 1.0 / 3);
  CHECK(depfi::shapley_weight(0, 1) == 1.0);

  // Summed over all subsets of the other features, the weights form a
  // probability: sum_s C(m-1, s) * w(s, m) = 1.
  for (std::size_t m = 1; m <= 24; ++m) {
    double total = 0.0;
    double binom = 1.0;  // C(m-1, s), updated incrementally
    for (std::size_t s = 0; s < m; ++s) {
      total += binom * depfi::shapley_weight(s, m);
      binom = binom * static_cast<double>(m - 1 - s) / static_cast<double>(s + 1);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }

  CHECK_THROWS_AS(depfi::shapley_weight(3, 3), depfi::InvalidSize);
  CHECK_THROWS_AS(depfi::shapley_weight(0, 0), depfi::InvalidSize);
}

TEST_CASE("xor bits split the importance exactly in half") {
  const FiResult fi = depfi::compute_fi(xor_pair());
  REQUIRE(fi.importances.size() == 2);
  CHECK(fi.importances[0] == 0.5);
  CHECK(fi.importances[1] == 0.5);
  CHECK(fi.total_dependency == 1.0);
  CHECK(fi.feature_names == std::vector<std::string>{"X1", "X2"});
  REQUIRE(fi.cache.complete());
  CHECK(fi.cache.at(0b11) == 1.0);
}

TEST_CASE("subset-average and ordering-average paths agree") {
  for (int id : {1, 2, 11, 14, 17, 20}) {
    const DiscreteDataset ds = depfi::get_dataset(id);
    const FiResult fast = depfi::compute_fi(ds);
    const FiResult slow = depfi::oracle_fi(ds);
    REQUIRE(fast.importances.size() == slow.importances.size());
    for (std::size_t i = 0; i < fast.importances.size(); ++i) {
      CHECK(std::fabs(fast.importances[i] - slow.importances[i]) <= 1e-9);
    }
  }
}

TEST_CASE("importances sum to the full subset's dependency") {
  for (int id : {2, 8, 15, 23}) {
    const FiResult fi = depfi::compute_fi(depfi::get_dataset(id));
    double sum = 0.0;
    for (double v : fi.importances) sum += v;
    CHECK(std::fabs(sum - fi.total_dependency) <= 1e-9);
  }
}

TEST_CASE("feature caps guard the exponential loops") {
  CHECK_THROWS_AS(depfi::compute_fi(depfi::get_dataset(17), 2),
                  depfi::TooManyFeatures);

  const DiscreteDataset wide = wide_dataset(9);
  CHECK_THROWS_AS(depfi::oracle_fi(wide), depfi::TooManyFeatures);
  const FiResult fi = depfi::compute_fi(wide);  // fine under the default cap
  CHECK(fi.importances.size() == 9);
}

TEST_CASE("constant target is rejected up front") {
  SyntheticSpec spec;
  spec.column_names = {"A", "Y"};
  spec.outcome_table = {{{0, 1}, {1, 2}}, {{1, 1}, {1, 2}}};
  spec.total_samples = 2;
  CHECK_THROWS_AS(depfi::compute_fi(depfi::materialize(spec)),
                  depfi::DependencyUndefined);
}

TEST_CASE("best_subset maximizes dependency at each size") {
  const FiResult fi = depfi::compute_fi(depfi::get_dataset(8));
  // The finest-binned copy alone already determines the target.
  CHECK(depfi::best_subset(fi.cache, 1) == 0b100);
  CHECK(fi.cache.at(depfi::best_subset(fi.cache, 3)) == 1.0);

  // All three bits of the first dataset are interchangeable, so the tie
  // resolves to the lowest mask.
  const FiResult symmetric = depfi::compute_fi(depfi::get_dataset(1));
  CHECK(depfi::best_subset(symmetric.cache, 1) == 0b001);

  CHECK_THROWS_AS(depfi::best_subset(fi.cache, 0), depfi::InvalidK);
  CHECK_THROWS_AS(depfi::best_subset(fi.cache, 4), depfi::InvalidK);

  depfi::SubsetDependencyCache broken = fi.cache;
  broken.entries.pop_back();
  CHECK_THROWS_AS(depfi::best_subset(broken, 1), depfi::IncompleteCache);
}

TEST_CASE("model predictions replace the target for attribution") {
  const DiscreteDataset ds = xor_pair();

  // A perfect model: attribution matches the data attribution.
  const FiResult direct = depfi::compute_fi(ds);
  const FiResult mirrored =
      depfi::fi_for_model_predictions(ds, ds.target());
  CHECK(mirrored.importances == direct.importances);

  depfi::Column constant{"pred", {0, 0, 0, 0}, {"1"}};
  CHECK_THROWS_AS(depfi::fi_for_model_predictions(ds, constant),
                  depfi::DependencyUndefined);

  depfi::Column short_col{"pred", {0}, {"1"}};
  CHECK_THROWS_AS(depfi::fi_for_model_predictions(ds, short_col),
                  depfi::LengthMismatch);
}
