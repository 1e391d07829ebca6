#include "depfi/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "depfi/catalog.hpp"
#include "depfi/errors.hpp"

namespace depfi {

namespace {

using nlohmann::json;

/// Slack below which two reference dependency values are treated as equal
/// when deriving ground truths (null-independence, full informativeness).
/// Far tighter than kEpsilon so grading never hinges on reference noise.
constexpr double kReferenceSlack = 1e-9;

constexpr std::array<const char*, kTestCount> kTestNames = {
    "efficiency-sum",
    "sum-stability",
    "symmetry",
    "range-lower",
    "range-upper",
    "lower-bound",
    "upper-bound",
    "null-independent-zero",
    "zero-null-independent",
    "single-informative-outcome",
    "informative-argmax",
    "binning-monotonic",
    "addition-can-increase",
    "addition-can-decrease",
    "clone-non-increase",
    "order-invariance",
    "xor-outcome",
    "probability-outcome",
};

/// Base/extended dataset pair whose total importances must agree.
struct SumPair {
  int base;
  int ext;
};

const std::vector<SumPair>& sum_stability_pairs() {
  static const std::vector<SumPair> pairs = {
      {1, 2},  {1, 3},   {1, 4},   {1, 5},   {6, 7},   {8, 9},
      {8, 10}, {11, 12}, {11, 13}, {14, 16}, {14, 17},
  };
  return pairs;
}

/// Feature correspondence between a base dataset and an extended one:
/// base feature i appears in the extended dataset at index map[i].
struct AdditionPair {
  int base;
  int ext;
  std::vector<int> map;
};

const std::vector<AdditionPair>& addition_pairs() {
  static const std::vector<AdditionPair> pairs = {
      {1, 2, {1, 2, 3}},      {2, 3, {0, 1, 2, 3}}, {3, 4, {0, 1, 2, 3, 4}},
      {6, 7, {0, 1, 2}},      {8, 9, {0, 2, 4}},    {8, 10, {2, 1, 0}},
      {15, 14, {0}},          {14, 16, {1, 2}},     {14, 17, {0, 1}},
  };
  return pairs;
}

/// The extended dataset duplicates base feature base_index; the surviving
/// original sits at ext_index there.
struct CloneCheck {
  int base;
  int ext;
  int base_index;
  int ext_index;
};

const std::vector<CloneCheck>& clone_checks() {
  static const std::vector<CloneCheck> checks = {
      {1, 2, 0, 1},
      {8, 10, 2, 0},
      {14, 16, 0, 1},
  };
  return checks;
}

/// Datasets a and b hold the same features in different positions/roles:
/// a's feature i corresponds to b's feature perm[i].
struct OrderCheck {
  int a;
  int b;
  std::vector<int> perm;
};

const std::vector<OrderCheck>& order_checks() {
  static const std::vector<OrderCheck> checks = {
      {4, 5, {3, 4, 5, 0, 1, 2}}, {18, 28, {1, 0}}, {19, 27, {1, 0}},
      {20, 26, {1, 0}},           {21, 25, {1, 0}}, {22, 24, {1, 0}},
  };
  return checks;
}

/// Datasets that contain at least one null-independent feature by
/// construction; which features qualify is derived from the reference cache.
const std::vector<int>& null_independent_datasets() {
  static const std::vector<int> ids = {6, 7, 11, 12, 15, 17, 18, 28};
  return ids;
}

/// Datasets that contain at least one feature which alone fully determines
/// the target.
const std::vector<int>& fully_informative_datasets() {
  static const std::vector<int> ids = {3, 4, 5, 8, 9, 10, 11, 12, 13, 18, 28};
  return ids;
}

using IndexPair = std::pair<int, int>;

/// Coarser/finer feature index pairs per dataset: the first feature is a
/// coarser-binned copy of the second, so it must not earn more importance.
const std::vector<std::pair<int, std::vector<IndexPair>>>& binning_pairs() {
  static const std::vector<std::pair<int, std::vector<IndexPair>>> pairs = {
      {8, {{0, 1}, {0, 2}, {1, 2}}},
      {9,
       {{0, 1},
        {0, 2},
        {0, 3},
        {0, 4},
        {1, 2},
        {1, 3},
        {1, 4},
        {2, 3},
        {2, 4},
        {3, 4}}},
      {10, {{2, 1}, {2, 0}, {2, 3}, {1, 0}, {1, 3}}},
  };
  return pairs;
}

std::vector<int> all_dataset_ids() {
  std::vector<int> ids(kCatalogSize);
  for (int i = 0; i < kCatalogSize; ++i) ids[i] = i + 1;
  return ids;
}

/// A vector sum collapsed to its comparison class: NaN (any NaN, or both
/// infinities present), one signed infinity, or a finite value.
enum class SumKind { kFinite, kNaN, kPosInf, kNegInf };

struct SumInfo {
  SumKind kind = SumKind::kFinite;
  double value = 0.0;
};

SumInfo vector_sum(const std::vector<double>& values) {
  bool has_nan = false;
  bool has_pos = false;
  bool has_neg = false;
  double total = 0.0;
  for (double v : values) {
    if (std::isnan(v)) {
      has_nan = true;
    } else if (std::isinf(v)) {
      (v > 0 ? has_pos : has_neg) = true;
    } else {
      total += v;
    }
  }
  if (has_nan || (has_pos && has_neg)) {
    return {SumKind::kNaN, std::numeric_limits<double>::quiet_NaN()};
  }
  if (has_pos) {
    return {SumKind::kPosInf, std::numeric_limits<double>::infinity()};
  }
  if (has_neg) {
    return {SumKind::kNegInf, -std::numeric_limits<double>::infinity()};
  }
  return {SumKind::kFinite, total};
}

/// Equality used wherever two importances must agree: twice NaN or twice the
/// same infinity counts as equal; finite values must agree within epsilon.
bool same_importance(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::fabs(a - b) <= kEpsilon;
}

/// Feature i is null-independent when adding it to any subset of the other
/// features leaves the dependency unchanged.
std::vector<bool> null_independent_features(const FiResult& reference) {
  const size_t m = reference.cache.feature_count;
  std::vector<bool> result(m, true);
  for (size_t i = 0; i < m; ++i) {
    const uint64_t bit = uint64_t{1} << i;
    for (uint64_t mask = 0; mask < (uint64_t{1} << m); ++mask) {
      if (mask & bit) continue;
      if (std::fabs(reference.cache.at(mask | bit) - reference.cache.at(mask)) >
          kReferenceSlack) {
        result[i] = false;
        break;
      }
    }
  }
  return result;
}

/// Feature i alone fully determines the target.
std::vector<bool> fully_informative_features(const FiResult& reference) {
  const size_t m = reference.cache.feature_count;
  std::vector<bool> result(m, false);
  for (size_t i = 0; i < m; ++i) {
    result[i] = reference.cache.at(uint64_t{1} << i) >= 1.0 - kReferenceSlack;
  }
  return result;
}

Counterexample make_ce(std::vector<int> dataset_ids, std::optional<int> feature,
                       double observed, double expected,
                       std::string description) {
  Counterexample ce;
  ce.dataset_ids = std::move(dataset_ids);
  ce.feature_index = feature;
  ce.observed = observed;
  ce.expected = expected;
  ce.description = std::move(description);
  return ce;
}

using Counterexamples = std::vector<Counterexample>;

void check_efficiency_sum(const FiSubmission& sub, const ReferenceResults& ref,
                          Counterexamples& out) {
  for (int id : all_dataset_ids()) {
    const SumInfo sum = vector_sum(*sub.vector_for(id));
    const double want = ref.fi(id).total_dependency;
    if (sum.kind != SumKind::kFinite) {
      out.push_back(make_ce({id}, std::nullopt, sum.value, want,
                            "sum of importances is not finite"));
    } else if (std::fabs(sum.value - want) > kEpsilon) {
      out.push_back(make_ce({id}, std::nullopt, sum.value, want,
                            "sum of importances deviates from the dependency "
                            "of the full feature set"));
    }
  }
}

void check_sum_stability(const FiSubmission& sub, const ReferenceResults&,
                         Counterexamples& out) {
  for (const SumPair& pair : sum_stability_pairs()) {
    const SumInfo base = vector_sum(*sub.vector_for(pair.base));
    const SumInfo ext = vector_sum(*sub.vector_for(pair.ext));
    const bool ok =
        base.kind == ext.kind &&
        (base.kind != SumKind::kFinite ||
         std::fabs(base.value - ext.value) <= kEpsilon);
    if (!ok) {
      out.push_back(make_ce({pair.base, pair.ext}, std::nullopt, ext.value,
                            base.value,
                            "sum of importances changed after extending the "
                            "feature set"));
    }
  }
}

void check_symmetry(const FiSubmission& sub, const ReferenceResults&,
                    Counterexamples& out) {
  for (int id : required_datasets(3)) {
    const std::vector<double>& v = *sub.vector_for(id);
    for (const auto& [i, j] : catalog_entry(id).symmetric_pairs) {
      if (!same_importance(v[i], v[j])) {
        out.push_back(make_ce(
            {id}, i, v[i], v[j],
            "interchangeable features " + std::to_string(i) + " and " +
                std::to_string(j) + " received different importances"));
      }
    }
  }
}

void check_range(const FiSubmission& sub, bool lower, Counterexamples& out) {
  for (int id : all_dataset_ids()) {
    const std::vector<double>& v = *sub.vector_for(id);
    for (size_t i = 0; i < v.size(); ++i) {
      const bool bad = std::isnan(v[i]) ||
                       (lower ? v[i] < -kEpsilon : v[i] > 1.0 + kEpsilon);
      if (bad) {
        out.push_back(make_ce({id}, static_cast<int>(i), v[i],
                              lower ? 0.0 : 1.0,
                              lower ? "importance is NaN or below zero"
                                    : "importance is NaN or above one"));
      }
    }
  }
}

void check_lower_bound(const FiSubmission& sub, const ReferenceResults& ref,
                       Counterexamples& out) {
  for (int id : all_dataset_ids()) {
    const std::vector<double>& v = *sub.vector_for(id);
    const FiResult& r = ref.fi(id);
    const double m = static_cast<double>(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
      const double bound = r.cache.at(uint64_t{1} << i) / m;
      if (!(v[i] >= bound - kEpsilon)) {
        out.push_back(make_ce({id}, static_cast<int>(i), v[i], bound,
                              "importance falls below the feature's "
                              "standalone dependency divided by the feature "
                              "count"));
      }
    }
  }
}

void check_upper_bound(const FiSubmission& sub, const ReferenceResults& ref,
                       Counterexamples& out) {
  for (int id : all_dataset_ids()) {
    const std::vector<double>& v = *sub.vector_for(id);
    const double bound = ref.fi(id).total_dependency;
    for (size_t i = 0; i < v.size(); ++i) {
      if (!(v[i] <= bound + kEpsilon)) {
        out.push_back(make_ce({id}, static_cast<int>(i), v[i], bound,
                              "importance exceeds the dependency of the full "
                              "feature set"));
      }
    }
  }
}

void check_null_independent_zero(const FiSubmission& sub,
                                 const ReferenceResults& ref,
                                 Counterexamples& out) {
  for (int id : null_independent_datasets()) {
    const std::vector<double>& v = *sub.vector_for(id);
    const std::vector<bool> is_null = null_independent_features(ref.fi(id));
    for (size_t i = 0; i < v.size(); ++i) {
      if (is_null[i] && !(std::fabs(v[i]) <= kEpsilon)) {
        out.push_back(make_ce({id}, static_cast<int>(i), v[i], 0.0,
                              "null-independent feature received a nonzero "
                              "importance"));
      }
    }
  }
}

void check_zero_null_independent(const FiSubmission& sub,
                                 const ReferenceResults& ref,
                                 Counterexamples& out) {
  for (int id : all_dataset_ids()) {
    const std::vector<double>& v = *sub.vector_for(id);
    const FiResult& r = ref.fi(id);
    const std::vector<bool> is_null = null_independent_features(r);
    for (size_t i = 0; i < v.size(); ++i) {
      if (std::fabs(v[i]) <= kEpsilon && !is_null[i]) {
        out.push_back(make_ce({id}, static_cast<int>(i), v[i],
                              r.importances[i],
                              "feature that carries information received a "
                              "near-zero importance"));
      }
    }
  }
}

void check_single_informative(const FiSubmission& sub, const ReferenceResults&,
                              Counterexamples& out) {
  const std::vector<double> want = {1.0, 0.0, 0.0};
  const std::vector<double>& v = *sub.vector_for(11);
  for (size_t i = 0; i < v.size(); ++i) {
    if (!(std::fabs(v[i] - want[i]) <= kEpsilon)) {
      out.push_back(make_ce({11}, static_cast<int>(i), v[i], want[i],
                            "expected all importance on the single feature "
                            "that determines the target"));
    }
  }
}

void check_informative_argmax(const FiSubmission& sub,
                              const ReferenceResults& ref,
                              Counterexamples& out) {
  for (int id : fully_informative_datasets()) {
    const std::vector<double>& v = *sub.vector_for(id);
    const std::vector<bool> full = fully_informative_features(ref.fi(id));
    for (size_t i = 0; i < v.size(); ++i) {
      if (!full[i]) continue;
      double best = -std::numeric_limits<double>::infinity();
      for (double x : v) {
        if (x > best) best = x;
      }
      if (std::isnan(v[i]) || best > v[i] + kEpsilon) {
        out.push_back(make_ce({id}, static_cast<int>(i), v[i], best,
                              "feature that fully determines the target does "
                              "not attain the maximal importance"));
      }
    }
  }
}

void check_binning_monotonic(const FiSubmission& sub, const ReferenceResults&,
                             Counterexamples& out) {
  for (const auto& [id, pairs] : binning_pairs()) {
    const std::vector<double>& v = *sub.vector_for(id);
    for (const auto& [coarse, fine] : pairs) {
      if (!(v[coarse] <= v[fine] + kEpsilon)) {
        out.push_back(make_ce({id}, coarse, v[coarse], v[fine],
                              "coarser-binned copy of a feature outranked "
                              "the finer-binned copy"));
      }
    }
  }
}

/// Tests 13/14 invert the usual reading: they fail when NO feature moves by
/// more than epsilon in the requested direction across all pairs.
void check_addition_change(const FiSubmission& sub, bool increase,
                           Counterexamples& out) {
  bool found = false;
  double extreme = increase ? -std::numeric_limits<double>::infinity()
                            : std::numeric_limits<double>::infinity();
  std::set<int> involved;
  for (const AdditionPair& pair : addition_pairs()) {
    involved.insert(pair.base);
    involved.insert(pair.ext);
    const std::vector<double>& base = *sub.vector_for(pair.base);
    const std::vector<double>& ext = *sub.vector_for(pair.ext);
    for (size_t i = 0; i < pair.map.size(); ++i) {
      const double delta = ext[pair.map[i]] - base[i];
      if (increase) {
        if (delta > kEpsilon) found = true;
        if (delta > extreme) extreme = delta;
      } else {
        if (delta < -kEpsilon) found = true;
        if (delta < extreme) extreme = delta;
      }
    }
  }
  if (!found) {
    out.push_back(make_ce(
        std::vector<int>(involved.begin(), involved.end()), std::nullopt,
        extreme, increase ? kEpsilon : -kEpsilon,
        increase
            ? "extending the feature set never raised any importance beyond "
              "the tolerance"
            : "extending the feature set never lowered any importance beyond "
              "the tolerance"));
  }
}

void check_clone_non_increase(const FiSubmission& sub, const ReferenceResults&,
                              Counterexamples& out) {
  for (const CloneCheck& check : clone_checks()) {
    const std::vector<double>& base = *sub.vector_for(check.base);
    const std::vector<double>& ext = *sub.vector_for(check.ext);
    if (ext[check.ext_index] > base[check.base_index] + kEpsilon) {
      out.push_back(make_ce({check.base, check.ext}, check.ext_index,
                            ext[check.ext_index], base[check.base_index],
                            "importance of a feature rose after adding an "
                            "identical copy of it"));
    }
  }
}

void check_order_invariance(const FiSubmission& sub, const ReferenceResults&,
                            Counterexamples& out) {
  for (const OrderCheck& check : order_checks()) {
    const std::vector<double>& va = *sub.vector_for(check.a);
    const std::vector<double>& vb = *sub.vector_for(check.b);
    for (size_t i = 0; i < check.perm.size(); ++i) {
      if (!same_importance(va[i], vb[check.perm[i]])) {
        out.push_back(make_ce({check.a, check.b}, static_cast<int>(i),
                              vb[check.perm[i]], va[i],
                              "matching features in the reordered dataset "
                              "received different importances"));
      }
    }
  }
}

void check_xor_outcome(const FiSubmission& sub, const ReferenceResults&,
                       Counterexamples& out) {
  const std::vector<std::pair<int, std::vector<double>>> cases = {
      {14, {0.5, 0.5}},
      {17, {0.5, 0.5, 0.0}},
  };
  for (const auto& [id, want] : cases) {
    const std::vector<double>& v = *sub.vector_for(id);
    for (size_t i = 0; i < v.size(); ++i) {
      if (!(std::fabs(v[i] - want[i]) <= kEpsilon)) {
        out.push_back(make_ce({id}, static_cast<int>(i), v[i], want[i],
                              "the two decisive bits must split the "
                              "importance equally"));
      }
    }
  }
}

void check_probability_outcome(const FiSubmission& sub,
                               const ReferenceResults&, Counterexamples& out) {
  for (int id = 18; id <= 28; ++id) {
    const double p = (id - 18) / 10.0;
    const std::vector<double> want = {p, 1.0 - p};
    const std::vector<double>& v = *sub.vector_for(id);
    for (size_t i = 0; i < v.size(); ++i) {
      if (!(std::fabs(v[i] - want[i]) <= kEpsilon)) {
        out.push_back(make_ce({id}, static_cast<int>(i), v[i], want[i],
                              "importances must equal the two mixing "
                              "probabilities"));
      }
    }
  }
}

size_t catalog_feature_count(int dataset_id) {
  return catalog_entry(dataset_id).spec.column_names.size() - 1;
}

void validate_lengths(const FiSubmission& sub) {
  for (const auto& [id, vec] : sub.results) {
    if (id < 1 || id > kCatalogSize) {
      throw MalformedSubmission("unknown dataset id " + std::to_string(id) +
                                " in submission");
    }
    if (vec && vec->size() != catalog_feature_count(id)) {
      throw MalformedSubmission(
          "dataset " + std::to_string(id) + " expects " +
          std::to_string(catalog_feature_count(id)) + " importances, got " +
          std::to_string(vec->size()));
    }
  }
}

json encode_double(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double decode_double(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string& s = j.get_ref<const std::string&>();
    if (s == "NaN") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw MalformedSubmission(
      "importance entries must be numbers or \"NaN\"/\"inf\"/\"-inf\", got " +
      j.dump());
}

std::string format_value(double v) {
  std::ostringstream out;
  out << std::setprecision(6) << v;
  return out.str();
}

}  // namespace

const std::vector<double>* FiSubmission::vector_for(int dataset_id) const {
  const auto it = results.find(dataset_id);
  if (it == results.end() || !it->second.has_value()) return nullptr;
  return &*it->second;
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kPass:
      return "pass";
    case Verdict::kFail:
      return "fail";
    case Verdict::kNoResult:
      return "no-result";
  }
  return "unknown";
}

int TestReport::count(Verdict verdict) const {
  int n = 0;
  for (const TestResult& t : tests) {
    if (t.verdict == verdict) ++n;
  }
  return n;
}

ReferenceResults::ReferenceResults() {
  results_.reserve(kCatalogSize);
  for (int id = 1; id <= kCatalogSize; ++id) {
    results_.push_back(compute_fi(get_dataset(id)));
  }
}

const ReferenceResults& ReferenceResults::instance() {
  static const ReferenceResults instance;
  return instance;
}

const FiResult& ReferenceResults::fi(int dataset_id) const {
  if (dataset_id < 1 || dataset_id > kCatalogSize) {
    throw UnknownDataset("dataset id must be in 1.." +
                         std::to_string(kCatalogSize) + ", got " +
                         std::to_string(dataset_id));
  }
  return results_[static_cast<size_t>(dataset_id) - 1];
}

std::vector<int> required_datasets(int test_id) {
  std::set<int> ids;
  switch (test_id) {
    case 1:
    case 4:
    case 5:
    case 6:
    case 7:
    case 9: {
      const std::vector<int> all = all_dataset_ids();
      ids.insert(all.begin(), all.end());
      break;
    }
    case 2:
      for (const SumPair& pair : sum_stability_pairs()) {
        ids.insert(pair.base);
        ids.insert(pair.ext);
      }
      break;
    case 3:
      for (int id = 1; id <= kCatalogSize; ++id) {
        if (!catalog_entry(id).symmetric_pairs.empty()) ids.insert(id);
      }
      break;
    case 8:
      ids.insert(null_independent_datasets().begin(),
                 null_independent_datasets().end());
      break;
    case 10:
      ids.insert(11);
      break;
    case 11:
      ids.insert(fully_informative_datasets().begin(),
                 fully_informative_datasets().end());
      break;
    case 12:
      for (const auto& [id, pairs] : binning_pairs()) ids.insert(id);
      break;
    case 13:
    case 14:
      for (const AdditionPair& pair : addition_pairs()) {
        ids.insert(pair.base);
        ids.insert(pair.ext);
      }
      break;
    case 15:
      for (const CloneCheck& check : clone_checks()) {
        ids.insert(check.base);
        ids.insert(check.ext);
      }
      break;
    case 16:
      for (const OrderCheck& check : order_checks()) {
        ids.insert(check.a);
        ids.insert(check.b);
      }
      break;
    case 17:
      ids.insert(14);
      ids.insert(17);
      break;
    case 18:
      for (int id = 18; id <= 28; ++id) ids.insert(id);
      break;
    default:
      throw InvalidArgument("test id must be in 1.." +
                            std::to_string(kTestCount) + ", got " +
                            std::to_string(test_id));
  }
  return std::vector<int>(ids.begin(), ids.end());
}

TestResult run_test(int test_id, const FiSubmission& submission,
                    const ReferenceResults& reference) {
  const std::vector<int> needed = required_datasets(test_id);  // checks id
  validate_lengths(submission);

  TestResult result;
  result.id = test_id;
  result.name = kTestNames[static_cast<size_t>(test_id) - 1];

  for (int id : needed) {
    if (submission.vector_for(id) == nullptr) {
      result.verdict = Verdict::kNoResult;
      return result;
    }
  }

  Counterexamples& ces = result.counterexamples;
  switch (test_id) {
    case 1:
      check_efficiency_sum(submission, reference, ces);
      break;
    case 2:
      check_sum_stability(submission, reference, ces);
      break;
    case 3:
      check_symmetry(submission, reference, ces);
      break;
    case 4:
      check_range(submission, /*lower=*/true, ces);
      break;
    case 5:
      check_range(submission, /*lower=*/false, ces);
      break;
    case 6:
      check_lower_bound(submission, reference, ces);
      break;
    case 7:
      check_upper_bound(submission, reference, ces);
      break;
    case 8:
      check_null_independent_zero(submission, reference, ces);
      break;
    case 9:
      check_zero_null_independent(submission, reference, ces);
      break;
    case 10:
      check_single_informative(submission, reference, ces);
      break;
    case 11:
      check_informative_argmax(submission, reference, ces);
      break;
    case 12:
      check_binning_monotonic(submission, reference, ces);
      break;
    case 13:
      check_addition_change(submission, /*increase=*/true, ces);
      break;
    case 14:
      check_addition_change(submission, /*increase=*/false, ces);
      break;
    case 15:
      check_clone_non_increase(submission, reference, ces);
      break;
    case 16:
      check_order_invariance(submission, reference, ces);
      break;
    case 17:
      check_xor_outcome(submission, reference, ces);
      break;
    case 18:
      check_probability_outcome(submission, reference, ces);
      break;
  }
  result.verdict = ces.empty() ? Verdict::kPass : Verdict::kFail;
  return result;
}

TestReport run_all(const FiSubmission& submission,
                   const ReferenceResults& reference) {
  validate_lengths(submission);
  TestReport report;
  report.method_name = submission.method_name;
  report.epsilon = kEpsilon;
  report.tests.reserve(kTestCount);
  for (int id = 1; id <= kTestCount; ++id) {
    report.tests.push_back(run_test(id, submission, reference));
  }
  return report;
}

FiSubmission self_submission(const ReferenceResults& reference) {
  FiSubmission sub;
  sub.method_name = "depfi";
  for (int id = 1; id <= kCatalogSize; ++id) {
    sub.results[id] = reference.fi(id).importances;
  }
  return sub;
}

FiSubmission parse_submission(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw MalformedSubmission(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw MalformedSubmission("submission must be a JSON object");
  }

  FiSubmission sub;
  if (j.contains("method_name")) {
    if (!j["method_name"].is_string()) {
      throw MalformedSubmission("method_name must be a string");
    }
    sub.method_name = j["method_name"].get<std::string>();
  }

  if (!j.contains("results") || !j["results"].is_object()) {
    throw MalformedSubmission("submission needs a \"results\" object");
  }
  for (const auto& [key, value] : j["results"].items()) {
    int id = 0;
    try {
      size_t pos = 0;
      id = std::stoi(key, &pos);
      if (pos != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw MalformedSubmission("dataset keys must be integers, got \"" + key +
                                "\"");
    }
    if (id < 1 || id > kCatalogSize) {
      throw MalformedSubmission("unknown dataset id " + std::to_string(id) +
                                " in submission");
    }
    if (value.is_null()) {
      sub.results[id] = std::nullopt;
      continue;
    }
    if (!value.is_array()) {
      throw MalformedSubmission("dataset " + std::to_string(id) +
                                " must map to an array or null");
    }
    std::vector<double> vec;
    vec.reserve(value.size());
    for (const json& item : value) {
      vec.push_back(decode_double(item));
    }
    sub.results[id] = std::move(vec);
  }
  validate_lengths(sub);
  return sub;
}

std::string submission_json(const FiSubmission& submission) {
  json results = json::object();
  for (const auto& [id, vec] : submission.results) {
    if (!vec) {
      results[std::to_string(id)] = nullptr;
      continue;
    }
    json arr = json::array();
    for (double v : *vec) arr.push_back(encode_double(v));
    results[std::to_string(id)] = std::move(arr);
  }
  json j;
  j["method_name"] = submission.method_name;
  j["results"] = std::move(results);
  return j.dump(2) + "\n";
}

std::string report_json(const TestReport& report) {
  json tests = json::array();
  for (const TestResult& t : report.tests) {
    json ces = json::array();
    for (const Counterexample& ce : t.counterexamples) {
      json entry;
      entry["dataset_ids"] = ce.dataset_ids;
      entry["feature_index"] =
          ce.feature_index ? json(*ce.feature_index) : json(nullptr);
      entry["observed"] = encode_double(ce.observed);
      entry["expected"] = encode_double(ce.expected);
      entry["description"] = ce.description;
      ces.push_back(std::move(entry));
    }
    json entry;
    entry["id"] = t.id;
    entry["name"] = t.name;
    entry["verdict"] = to_string(t.verdict);
    entry["counterexamples"] = std::move(ces);
    tests.push_back(std::move(entry));
  }
  json j;
  j["method_name"] = report.method_name;
  j["epsilon"] = report.epsilon;
  j["summary"] = {{"pass", report.count(Verdict::kPass)},
                  {"fail", report.count(Verdict::kFail)},
                  {"no_result", report.count(Verdict::kNoResult)},
                  {"all_passed", report.all_passed()}};
  j["tests"] = std::move(tests);
  return j.dump(2) + "\n";
}

std::string report_table(const TestReport& report) {
  std::ostringstream out;
  out << "verification of '" << report.method_name
      << "' (epsilon = " << report.epsilon << ")\n";
  out << " id  " << std::left << std::setw(28) << "test" << std::setw(11)
      << "verdict" << "details\n";
  for (const TestResult& t : report.tests) {
    out << std::right << std::setw(3) << t.id << "  " << std::left
        << std::setw(28) << t.name << std::setw(11) << to_string(t.verdict);
    if (t.verdict == Verdict::kNoResult) {
      out << "missing results for at least one required dataset";
    } else if (!t.counterexamples.empty()) {
      const Counterexample& ce = t.counterexamples.front();
      out << t.counterexamples.size() << " counterexample"
          << (t.counterexamples.size() == 1 ? "" : "s") << "; dataset";
      for (size_t i = 0; i < ce.dataset_ids.size(); ++i) {
        out << (i == 0 ? " " : "+") << ce.dataset_ids[i];
      }
      if (ce.feature_index) out << " feature " << *ce.feature_index;
      out << ": observed " << format_value(ce.observed) << ", expected "
          << format_value(ce.expected);
    }
    out << "\n";
  }
  out << "summary: " << report.count(Verdict::kPass) << " pass, "
      << report.count(Verdict::kFail) << " fail, "
      << report.count(Verdict::kNoResult) << " no-result\n";
  return out.str();
}

}  // namespace depfi
