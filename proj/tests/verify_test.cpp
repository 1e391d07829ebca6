#include "depfi/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "depfi/catalog.hpp"
#include "depfi/errors.hpp"

namespace {

using depfi::FiSubmission;
using depfi::ReferenceResults;
using depfi::TestReport;
using depfi::TestResult;
using depfi::Verdict;

const ReferenceResults& ref() { return ReferenceResults::instance(); }

FiSubmission self() { return depfi::self_submission(ref()); }

const TestResult& test_of(const TestReport& report, int id) {
  return report.tests.at(static_cast<std::size_t>(id) - 1);
}

bool requires_dataset(int test_id, int dataset_id) {
  const std::vector<int> needed = depfi::required_datasets(test_id);
  return std::find(needed.begin(), needed.end(), dataset_id) != needed.end();
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_CASE("the built-in importances pass every test") {
  const TestReport report = depfi::run_all(self(), ref());
  REQUIRE(report.tests.size() == depfi::kTestCount);
  CHECK(report.method_name == "depfi");
  CHECK(report.epsilon == 0.01);
  CHECK(report.all_passed());
  for (const TestResult& t : report.tests) {
    CAPTURE(t.id);
    CHECK(t.verdict == Verdict::kPass);
    CHECK(t.counterexamples.empty());
  }
}

TEST_CASE("a 0.05 perturbation on the xor dataset fails exactly the tests "
          "that grade it strictly") {
  FiSubmission sub = self();
  (*sub.results[14])[0] += 0.05;

  const TestReport report = depfi::run_all(sub, ref());
  const std::vector<int> expected_failures = {1, 2, 3, 17};
  for (const TestResult& t : report.tests) {
    CAPTURE(t.id);
    const bool should_fail =
        std::find(expected_failures.begin(), expected_failures.end(), t.id) !=
        expected_failures.end();
    CHECK(t.verdict == (should_fail ? Verdict::kFail : Verdict::kPass));
    if (should_fail) {
      REQUIRE_FALSE(t.counterexamples.empty());
      // Every recorded violation traces back to the perturbed dataset.
      for (const depfi::Counterexample& ce : t.counterexamples) {
        CHECK(std::find(ce.dataset_ids.begin(), ce.dataset_ids.end(), 14) !=
              ce.dataset_ids.end());
      }
    }
  }

  const depfi::Counterexample& ce = test_of(report, 17).counterexamples.front();
  CHECK(ce.dataset_ids == std::vector<int>{14});
  CHECK(ce.feature_index == 0);
  CHECK(ce.observed == doctest::Approx(0.55).epsilon(1e-12));
  CHECK(ce.expected == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("missing vectors yield no-result for exactly the tests that need "
          "them") {
  SUBCASE("every vector missing") {
    FiSubmission sub;
    sub.method_name = "empty";
    const TestReport report = depfi::run_all(sub, ref());
    for (const TestResult& t : report.tests) {
      CHECK(t.verdict == Verdict::kNoResult);
    }
    CHECK(report.count(Verdict::kNoResult) == depfi::kTestCount);
  }

  SUBCASE("explicit nulls count as missing too") {
    FiSubmission sub;
    sub.method_name = "all-null";
    for (int id = 1; id <= depfi::kCatalogSize; ++id) {
      sub.results[id] = std::nullopt;
    }
    const TestReport report = depfi::run_all(sub, ref());
    CHECK(report.count(Verdict::kNoResult) == depfi::kTestCount);
  }

  SUBCASE("one absent dataset voids only the tests requiring it") {
    for (int missing : {11, 14}) {
      CAPTURE(missing);
      FiSubmission sub = self();
      sub.results.erase(missing);
      const TestReport report = depfi::run_all(sub, ref());
      for (const TestResult& t : report.tests) {
        CAPTURE(t.id);
        const Verdict want = requires_dataset(t.id, missing)
                                 ? Verdict::kNoResult
                                 : Verdict::kPass;
        CHECK(t.verdict == want);
      }
    }
  }

  SUBCASE("the single-dataset test reports no-result without its dataset") {
    FiSubmission sub = self();
    sub.results[11] = std::nullopt;
    CHECK(depfi::run_test(10, sub, ref()).verdict == Verdict::kNoResult);
  }
}

TEST_CASE("an all-zero submission misses the prescribed outcomes") {
  FiSubmission sub;
  sub.method_name = "zeros";
  for (int id = 1; id <= depfi::kCatalogSize; ++id) {
    sub.results[id] =
        std::vector<double>(ref().fi(id).importances.size(), 0.0);
  }
  const TestReport report = depfi::run_all(sub, ref());
  CHECK(test_of(report, 17).verdict == Verdict::kFail);
  CHECK(test_of(report, 18).verdict == Verdict::kFail);
  CHECK(test_of(report, 10).verdict == Verdict::kFail);
  CHECK(test_of(report, 13).verdict == Verdict::kFail);  // nothing increases
  CHECK(test_of(report, 14).verdict == Verdict::kFail);  // nothing decreases
  CHECK(test_of(report, 4).verdict == Verdict::kPass);
  CHECK(test_of(report, 5).verdict == Verdict::kPass);
  CHECK(test_of(report, 3).verdict == Verdict::kPass);
  CHECK(test_of(report, 16).verdict == Verdict::kPass);
}

TEST_CASE("twice NaN or twice the same infinity count as equal") {
  FiSubmission sub = self();
  sub.results[14] = std::vector<double>{kNaN, kNaN};
  sub.results[16] = std::vector<double>{kNaN, kNaN, kNaN};
  sub.results[17] = std::vector<double>{kNaN, kNaN, kNaN};

  const TestReport report = depfi::run_all(sub, ref());
  CHECK(test_of(report, 2).verdict == Verdict::kPass);   // NaN sums match
  CHECK(test_of(report, 3).verdict == Verdict::kPass);   // NaN == NaN here
  CHECK(test_of(report, 1).verdict == Verdict::kFail);   // sum not finite
  CHECK(test_of(report, 4).verdict == Verdict::kFail);   // NaN out of range
  CHECK(test_of(report, 5).verdict == Verdict::kFail);
  CHECK(test_of(report, 17).verdict == Verdict::kFail);
}

TEST_CASE("infinities follow the usual order comparisons") {
  FiSubmission sub = self();
  sub.results[14] = std::vector<double>{kInf, kInf};

  const TestReport report = depfi::run_all(sub, ref());
  CHECK(test_of(report, 3).verdict == Verdict::kPass);  // same infinity
  CHECK(test_of(report, 4).verdict == Verdict::kPass);  // not below zero
  CHECK(test_of(report, 5).verdict == Verdict::kFail);  // above one
  CHECK(test_of(report, 13).verdict == Verdict::kPass);  // jump to +inf found
  CHECK(test_of(report, 14).verdict == Verdict::kPass);  // drop from +inf found
  CHECK(test_of(report, 15).verdict == Verdict::kPass);
}

TEST_CASE("required datasets per test") {
  using V = std::vector<int>;
  const V all = [] {
    V v;
    for (int id = 1; id <= depfi::kCatalogSize; ++id) v.push_back(id);
    return v;
  }();
  CHECK(depfi::required_datasets(1) == all);
  CHECK(depfi::required_datasets(4) == all);
  CHECK(depfi::required_datasets(9) == all);
  CHECK(depfi::required_datasets(2) ==
        V{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 16, 17});
  CHECK(depfi::required_datasets(3) ==
        V{1, 2, 3, 4, 5, 6, 7, 10, 11, 12, 13, 14, 16, 17, 23});
  CHECK(depfi::required_datasets(8) == V{6, 7, 11, 12, 15, 17, 18, 28});
  CHECK(depfi::required_datasets(10) == V{11});
  CHECK(depfi::required_datasets(11) == V{3, 4, 5, 8, 9, 10, 11, 12, 13, 18, 28});
  CHECK(depfi::required_datasets(12) == V{8, 9, 10});
  CHECK(depfi::required_datasets(13) ==
        V{1, 2, 3, 4, 6, 7, 8, 9, 10, 14, 15, 16, 17});
  CHECK(depfi::required_datasets(14) == depfi::required_datasets(13));
  CHECK(depfi::required_datasets(15) == V{1, 2, 8, 10, 14, 16});
  CHECK(depfi::required_datasets(16) ==
        V{4, 5, 18, 19, 20, 21, 22, 24, 25, 26, 27, 28});
  CHECK(depfi::required_datasets(17) == V{14, 17});
  CHECK(depfi::required_datasets(18) ==
        V{18, 19, 20, 21, 22, 23, 24, 25, 26, 27, 28});

  CHECK_THROWS_AS(depfi::required_datasets(0), depfi::InvalidArgument);
  CHECK_THROWS_AS(depfi::required_datasets(19), depfi::InvalidArgument);
  CHECK_THROWS_AS(depfi::run_test(0, self(), ref()), depfi::InvalidArgument);
}

TEST_CASE("submissions with wrong vector lengths are rejected") {
  FiSubmission sub = self();
  sub.results[14] = std::vector<double>{0.5, 0.5, 0.5};
  CHECK_THROWS_AS(depfi::run_all(sub, ref()), depfi::MalformedSubmission);
  CHECK_THROWS_AS(depfi::run_test(1, sub, ref()), depfi::MalformedSubmission);
  sub.results[14] = std::vector<double>{};
  CHECK_THROWS_AS(depfi::run_all(sub, ref()), depfi::MalformedSubmission);
}

TEST_CASE("submission JSON round-trips exactly") {
  FiSubmission sub;
  sub.method_name = "mixed";
  sub.results[14] = std::vector<double>{kNaN, -kInf};
  sub.results[15] = std::vector<double>{0.1234567890123456789};
  sub.results[18] = std::nullopt;

  const std::string text = depfi::submission_json(sub);
  std::istringstream in(text);
  const FiSubmission back = depfi::parse_submission(in);

  CHECK(back.method_name == "mixed");
  REQUIRE(back.results.size() == 3);
  REQUIRE(back.vector_for(14) != nullptr);
  CHECK(std::isnan((*back.vector_for(14))[0]));
  CHECK((*back.vector_for(14))[1] == -kInf);
  CHECK((*back.vector_for(15))[0] == (*sub.vector_for(15))[0]);
  CHECK(back.results.count(18) == 1);
  CHECK_FALSE(back.results.at(18).has_value());
  CHECK(back.vector_for(18) == nullptr);
  CHECK(back.vector_for(1) == nullptr);  // absent entirely

  std::istringstream again(depfi::submission_json(back));
  CHECK(depfi::submission_json(depfi::parse_submission(again)) == text);
}

TEST_CASE("malformed submissions are diagnosed") {
  const std::vector<std::string> bad = {
      "not json at all",
      "[1, 2, 3]",
      "{\"method_name\": \"x\"}",
      "{\"method_name\": 5, \"results\": {}}",
      "{\"method_name\": \"x\", \"results\": []}",
      "{\"method_name\": \"x\", \"results\": {\"abc\": null}}",
      "{\"method_name\": \"x\", \"results\": {\"0\": null}}",
      "{\"method_name\": \"x\", \"results\": {\"29\": null}}",
      "{\"method_name\": \"x\", \"results\": {\"14\": 3}}",
      "{\"method_name\": \"x\", \"results\": {\"14\": [0.5, \"Infinity\"]}}",
      "{\"method_name\": \"x\", \"results\": {\"14\": [0.5, null]}}",
      "{\"method_name\": \"x\", \"results\": {\"14\": [0.5, 0.5, 0.5]}}",
  };
  for (const std::string& text : bad) {
    CAPTURE(text);
    std::istringstream in(text);
    CHECK_THROWS_AS(depfi::parse_submission(in), depfi::MalformedSubmission);
  }

  std::istringstream minimal("{\"results\": {\"14\": [0.5, 0.5]}}");
  const FiSubmission sub = depfi::parse_submission(minimal);
  CHECK(sub.method_name.empty());
  REQUIRE(sub.vector_for(14) != nullptr);
}

TEST_CASE("reports serialize deterministically") {
  const TestReport report = depfi::run_all(self(), ref());

  const std::string json_text = depfi::report_json(report);
  CHECK(json_text == depfi::report_json(depfi::run_all(self(), ref())));

  const nlohmann::json parsed = nlohmann::json::parse(json_text);
  CHECK(parsed["epsilon"] == 0.01);
  CHECK(parsed["method_name"] == "depfi");
  CHECK(parsed["summary"]["pass"] == 18);
  CHECK(parsed["summary"]["fail"] == 0);
  CHECK(parsed["summary"]["no_result"] == 0);
  CHECK(parsed["summary"]["all_passed"] == true);
  REQUIRE(parsed["tests"].size() == 18);
  CHECK(parsed["tests"][0]["name"] == "efficiency-sum");
  CHECK(parsed["tests"][0]["verdict"] == "pass");

  const std::string table = depfi::report_table(report);
  CHECK(table.find("summary: 18 pass, 0 fail, 0 no-result") !=
        std::string::npos);
  CHECK(table.find("efficiency-sum") != std::string::npos);
  CHECK(table.find("probability-outcome") != std::string::npos);
}

TEST_CASE("reference results reject unknown ids") {
  CHECK_THROWS_AS(ref().fi(0), depfi::UnknownDataset);
  CHECK_THROWS_AS(ref().fi(29), depfi::UnknownDataset);
  CHECK(ref().fi(14).importances.size() == 2);
}
