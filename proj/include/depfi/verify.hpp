#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "depfi/shapley.hpp"

namespace depfi {

/// Grading tolerance for every verification test.
inline constexpr double kEpsilon = 0.01;

inline constexpr int kTestCount = 18;

/// Importance vectors produced by some method, one per catalog dataset.
/// A missing key or an empty optional both mean "no result" for that dataset.
/// Entries may be NaN or +-infinity; the tests define how those grade.
struct FiSubmission {
  std::string method_name;
  std::map<int, std::optional<std::vector<double>>> results;

  /// The vector for a dataset, or nullptr when absent.
  const std::vector<double>* vector_for(int dataset_id) const;
};

enum class Verdict { kPass, kFail, kNoResult };

std::string to_string(Verdict verdict);

/// One recorded violation: where it happened, what was seen, what the test
/// wanted. feature_index is empty for whole-vector findings.
struct Counterexample {
  std::vector<int> dataset_ids;
  std::optional<int> feature_index;
  double observed = 0.0;
  double expected = 0.0;
  std::string description;
};

struct TestResult {
  int id = 0;
  std::string name;
  Verdict verdict = Verdict::kNoResult;
  std::vector<Counterexample> counterexamples;  // nonempty iff kFail
};

struct TestReport {
  std::string method_name;
  double epsilon = kEpsilon;
  std::vector<TestResult> tests;  // one per test, ordered by id

  int count(Verdict verdict) const;
  bool all_passed() const { return count(Verdict::kPass) == kTestCount; }
};

/// Exact importances and subset-dependency caches for all catalog datasets,
/// computed once on first use. The tests grade submissions against these.
class ReferenceResults {
 public:
  static const ReferenceResults& instance();
  const FiResult& fi(int dataset_id) const;

  ReferenceResults(const ReferenceResults&) = delete;
  ReferenceResults& operator=(const ReferenceResults&) = delete;

 private:
  ReferenceResults();
  std::vector<FiResult> results_;
};

/// Runs all tests. A test reports kNoResult exactly when the submission
/// misses a vector for at least one dataset the test needs; kFail always
/// carries at least one counterexample. Throws MalformedSubmission when a
/// present vector's length does not match its dataset's feature count.
TestReport run_all(const FiSubmission& submission,
                   const ReferenceResults& reference);

/// Runs a single test (1..18). Throws InvalidArgument for an unknown id and
/// MalformedSubmission as in run_all.
TestResult run_test(int test_id, const FiSubmission& submission,
                    const ReferenceResults& reference);

/// Dataset ids a test grades, ascending. Throws InvalidArgument.
std::vector<int> required_datasets(int test_id);

/// The built-in method's own importances packaged as a submission.
FiSubmission self_submission(const ReferenceResults& reference);

/// Reads submission JSON:
///   {"method_name": "...", "results": {"<id>": [numbers|"NaN"|"inf"|"-inf"]
///                                      | null, ...}}
/// Throws MalformedSubmission.
FiSubmission parse_submission(std::istream& in);

/// Serializes a submission to the same JSON shape, keys sorted. Non-finite
/// values become the string tokens above.
std::string submission_json(const FiSubmission& submission);

/// Full report as key-sorted JSON: epsilon, per-test verdicts with
/// counterexamples, and a summary block.
std::string report_json(const TestReport& report);

/// Human-readable verdict table.
std::string report_table(const TestReport& report);

}  // namespace depfi
