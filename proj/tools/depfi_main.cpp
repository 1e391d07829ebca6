#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "depfi/catalog.hpp"
#include "depfi/dataset.hpp"
#include "depfi/dependency.hpp"
#include "depfi/errors.hpp"
#include "depfi/shapley.hpp"
#include "depfi/verify.hpp"

namespace {

using nlohmann::json;

struct ComputeOptions {
  std::string input;
  std::string target;
  std::vector<std::string> bin_specs;
  std::size_t max_features = depfi::kDefaultFeatureCap;
  bool emit_subsets = false;
  bool best_k = false;
  std::string format = "table";
  std::string output;
};

struct DatasetOptions {
  int id = 0;
  std::string format = "csv";
  std::string output;
};

struct VerifyOptions {
  std::string submission;
  bool self = false;
  std::string emit_submission;
  std::string format = "table";
  std::string output;
};

/// col:k or col:k:width or col:k:frequency
depfi::BinningRule parse_bin_spec(const std::string& spec) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(spec);
  while (std::getline(in, part, ':')) parts.push_back(part);
  if (parts.size() < 2 || parts.size() > 3 || parts[0].empty()) {
    throw depfi::InvalidArgument("--bins expects col:k or col:k:strategy, got \"" +
                                 spec + "\"");
  }
  depfi::BinningRule rule;
  rule.column = parts[0];
  try {
    size_t pos = 0;
    rule.bin_count = std::stoi(parts[1], &pos);
    if (pos != parts[1].size()) throw std::invalid_argument(parts[1]);
  } catch (const std::exception&) {
    throw depfi::InvalidArgument("--bins count must be an integer, got \"" +
                                 parts[1] + "\"");
  }
  if (rule.bin_count < 1) {
    throw depfi::InvalidArgument("--bins count must be at least 1");
  }
  if (parts.size() == 3) {
    if (parts[2] == "width") {
      rule.strategy = depfi::BinningStrategy::kEqualWidth;
    } else if (parts[2] == "frequency") {
      rule.strategy = depfi::BinningStrategy::kEqualFrequency;
    } else {
      throw depfi::InvalidArgument(
          "--bins strategy must be width or frequency, got \"" + parts[2] +
          "\"");
    }
  }
  return rule;
}

/// Writes to the path, or to stdout when the path is empty.
void deliver(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw depfi::InvalidArgument("cannot open output file \"" + path + "\"");
  }
  out << text;
  if (!out) {
    throw depfi::InvalidArgument("cannot write output file \"" + path + "\"");
  }
}

std::string fixed6(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(6) << v;
  return out.str();
}

/// Shortest decimal string that round-trips the exact double.
std::string full_precision(double v) { return json(v).dump(); }

std::vector<std::string> mask_names(std::uint64_t mask,
                                    const std::vector<std::string>& names) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (mask & (std::uint64_t{1} << i)) out.push_back(names[i]);
  }
  return out;
}

std::string brace_list(const std::vector<std::string>& names) {
  std::string out = "{";
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out += ", ";
    out += names[i];
  }
  return out + "}";
}

std::string join(const std::vector<std::string>& names, char sep) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out += sep;
    out += names[i];
  }
  return out;
}

std::string render_compute_json(const depfi::FiResult& fi,
                                const ComputeOptions& opt) {
  json j;
  j["feature_names"] = fi.feature_names;
  j["importances"] = fi.importances;
  j["total_dependency"] = fi.total_dependency;
  if (opt.emit_subsets) {
    json subsets = json::array();
    for (std::uint64_t mask = 0; mask < fi.cache.entries.size(); ++mask) {
      json entry;
      entry["mask"] = mask;
      entry["features"] = mask_names(mask, fi.feature_names);
      entry["dependency"] = fi.cache.at(mask);
      subsets.push_back(std::move(entry));
    }
    j["subset_dependencies"] = std::move(subsets);
  }
  if (opt.best_k) {
    json best = json::array();
    for (std::size_t k = 1; k <= fi.feature_names.size(); ++k) {
      const std::uint64_t mask = depfi::best_subset(fi.cache, k);
      json entry;
      entry["k"] = k;
      entry["features"] = mask_names(mask, fi.feature_names);
      entry["dependency"] = fi.cache.at(mask);
      best.push_back(std::move(entry));
    }
    j["best_subsets"] = std::move(best);
  }
  return j.dump(2) + "\n";
}

std::string render_compute_csv(const depfi::FiResult& fi,
                               const ComputeOptions& opt) {
  std::ostringstream out;
  out << "feature,importance\n";
  for (std::size_t i = 0; i < fi.feature_names.size(); ++i) {
    out << fi.feature_names[i] << "," << full_precision(fi.importances[i])
        << "\n";
  }
  out << "total_dependency," << full_precision(fi.total_dependency) << "\n";
  if (opt.emit_subsets) {
    out << "\nmask,features,dependency\n";
    for (std::uint64_t mask = 0; mask < fi.cache.entries.size(); ++mask) {
      out << mask << "," << join(mask_names(mask, fi.feature_names), '+')
          << "," << full_precision(fi.cache.at(mask)) << "\n";
    }
  }
  if (opt.best_k) {
    out << "\nk,features,dependency\n";
    for (std::size_t k = 1; k <= fi.feature_names.size(); ++k) {
      const std::uint64_t mask = depfi::best_subset(fi.cache, k);
      out << k << "," << join(mask_names(mask, fi.feature_names), '+') << ","
          << full_precision(fi.cache.at(mask)) << "\n";
    }
  }
  return out.str();
}

std::string render_compute_table(const depfi::FiResult& fi,
                                 const ComputeOptions& opt) {
  std::size_t width = 7;  // len("feature")
  for (const std::string& name : fi.feature_names) {
    width = std::max(width, name.size());
  }
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(width) + 2) << "feature"
      << "importance\n";
  for (std::size_t i = 0; i < fi.feature_names.size(); ++i) {
    out << std::left << std::setw(static_cast<int>(width) + 2)
        << fi.feature_names[i] << fixed6(fi.importances[i]) << "\n";
  }
  out << "total dependency = " << fixed6(fi.total_dependency) << "\n";
  if (opt.emit_subsets) {
    out << "\nsubset dependencies:\n";
    for (std::uint64_t mask = 0; mask < fi.cache.entries.size(); ++mask) {
      out << "  " << brace_list(mask_names(mask, fi.feature_names)) << " = "
          << fixed6(fi.cache.at(mask)) << "\n";
    }
  }
  if (opt.best_k) {
    out << "\nbest subsets by size:\n";
    for (std::size_t k = 1; k <= fi.feature_names.size(); ++k) {
      const std::uint64_t mask = depfi::best_subset(fi.cache, k);
      out << "  k=" << k << ": "
          << brace_list(mask_names(mask, fi.feature_names)) << " = "
          << fixed6(fi.cache.at(mask)) << "\n";
    }
  }
  return out.str();
}

int run_compute(const ComputeOptions& opt) {
  std::vector<depfi::BinningRule> rules;
  rules.reserve(opt.bin_specs.size());
  for (const std::string& spec : opt.bin_specs) {
    rules.push_back(parse_bin_spec(spec));
  }

  depfi::FiResult fi;
  if (opt.input == "-") {
    fi = depfi::compute_fi(depfi::read_csv(std::cin, opt.target, rules),
                           opt.max_features);
  } else {
    std::ifstream in(opt.input, std::ios::binary);
    if (!in) {
      throw depfi::InvalidArgument("cannot open input file \"" + opt.input +
                                   "\"");
    }
    fi = depfi::compute_fi(depfi::read_csv(in, opt.target, rules),
                           opt.max_features);
  }

  if (opt.format == "json") {
    deliver(opt.output, render_compute_json(fi, opt));
  } else if (opt.format == "csv") {
    deliver(opt.output, render_compute_csv(fi, opt));
  } else {
    deliver(opt.output, render_compute_table(fi, opt));
  }
  return 0;
}

std::string render_dataset_table(const depfi::DiscreteDataset& ds) {
  std::vector<const depfi::Column*> columns;
  for (const depfi::Column& c : ds.features()) columns.push_back(&c);
  columns.push_back(&ds.target());

  std::vector<std::size_t> widths;
  for (const depfi::Column* c : columns) {
    std::size_t w = c->name.size();
    for (const std::string& label : c->labels) w = std::max(w, label.size());
    widths.push_back(w);
  }
  std::ostringstream out;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    out << std::left << std::setw(static_cast<int>(widths[c]) + 2)
        << columns[c]->name;
  }
  out << "\n";
  for (std::size_t row = 0; row < ds.n_samples(); ++row) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      out << std::left << std::setw(static_cast<int>(widths[c]) + 2)
          << columns[c]->labels[static_cast<std::size_t>(
                 columns[c]->codes[row])];
    }
    out << "\n";
  }
  return out.str();
}

int run_dataset(const DatasetOptions& opt) {
  const depfi::DiscreteDataset ds = depfi::get_dataset(opt.id);
  if (opt.format == "table") {
    deliver(opt.output, render_dataset_table(ds));
  } else {
    std::ostringstream out;
    depfi::write_csv(ds, out);
    deliver(opt.output, out.str());
  }
  return 0;
}

int run_verify(const VerifyOptions& opt) {
  if (opt.self != opt.submission.empty()) {
    throw depfi::InvalidArgument(
        "verify needs exactly one of: a submission file, or --self");
  }
  const depfi::ReferenceResults& reference = depfi::ReferenceResults::instance();

  depfi::FiSubmission submission;
  if (opt.self) {
    submission = depfi::self_submission(reference);
  } else {
    std::ifstream in(opt.submission, std::ios::binary);
    if (!in) {
      throw depfi::MalformedSubmission("cannot open submission file \"" +
                                       opt.submission + "\"");
    }
    submission = depfi::parse_submission(in);
  }

  if (!opt.emit_submission.empty()) {
    deliver(opt.emit_submission, depfi::submission_json(submission));
  }

  const depfi::TestReport report = depfi::run_all(submission, reference);
  if (opt.format == "json") {
    deliver(opt.output, depfi::report_json(report));
  } else {
    deliver(opt.output, depfi::report_table(report));
  }
  return report.all_passed() ? 0 : 1;
}

template <typename Fn>
int run_guarded(const Fn& body) {
  try {
    return body();
  } catch (const depfi::DependencyUndefined& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const depfi::TooManyFeatures& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const depfi::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "depfi: exact feature importance for discrete data, computed as a "
      "Shapley attribution over a normalized dependency measure."};
  app.require_subcommand(1);

  ComputeOptions compute;
  CLI::App* compute_cmd = app.add_subcommand(
      "compute", "Compute feature importances for a CSV file");
  compute_cmd
      ->add_option("input", compute.input,
                   "CSV file with a header row, or - for stdin")
      ->required();
  compute_cmd->add_option("--target", compute.target, "Target column name")
      ->required();
  compute_cmd->add_option(
      "--bins", compute.bin_specs,
      "Discretize a numeric column: col:k or col:k:width|frequency");
  compute_cmd
      ->add_option("--max-features", compute.max_features,
                   "Cap on the feature count (cost doubles per feature)")
      ->envname("DEPFI_MAX_FEATURES")
      ->check(CLI::PositiveNumber);
  compute_cmd->add_flag("--emit-subsets", compute.emit_subsets,
                        "Also print the dependency of every feature subset");
  compute_cmd->add_flag(
      "--best-k", compute.best_k,
      "Also print the highest-dependency subset of every size");
  compute_cmd
      ->add_option("--format", compute.format, "Output format")
      ->check(CLI::IsMember({"table", "csv", "json"}))
      ->capture_default_str();
  compute_cmd->add_option("--output", compute.output,
                          "Write to this file instead of stdout");

  DatasetOptions dataset;
  CLI::App* dataset_cmd =
      app.add_subcommand("dataset", "Export a built-in benchmark dataset");
  dataset_cmd->add_option("id", dataset.id, "Dataset id (1..28)")->required();
  dataset_cmd->add_option("--format", dataset.format, "Output format")
      ->check(CLI::IsMember({"csv", "table"}))
      ->capture_default_str();
  dataset_cmd->add_option("--output", dataset.output,
                          "Write to this file instead of stdout");

  VerifyOptions verify;
  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "Grade a submission of importance vectors against the "
                "built-in benchmark tests");
  verify_cmd->add_option("submission", verify.submission,
                         "Submission JSON file");
  verify_cmd->add_flag("--self", verify.self,
                       "Grade the built-in method's own importances");
  verify_cmd->add_option("--emit-submission", verify.emit_submission,
                         "Also write the graded submission as canonical JSON");
  verify_cmd->add_option("--format", verify.format, "Report format")
      ->check(CLI::IsMember({"table", "json"}))
      ->capture_default_str();
  verify_cmd->add_option("--output", verify.output,
                         "Write the report to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (app.got_subcommand(compute_cmd)) {
    return run_guarded([&] { return run_compute(compute); });
  }
  if (app.got_subcommand(dataset_cmd)) {
    return run_guarded([&] { return run_dataset(dataset); });
  }
  return run_guarded([&] { return run_verify(verify); });
}
