#include "depfi/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace depfi {

namespace {

void validate_column(const Column& col, std::size_t n) {
  if (col.codes.size() != n) {
    throw InvalidArgument("column '" + col.name + "' has " +
                          std::to_string(col.codes.size()) + " rows, expected " +
                          std::to_string(n));
  }
  const auto label_count = static_cast<Code>(col.labels.size());
  for (Code c : col.codes) {
    if (c < 0 || c >= label_count) {
      throw InvalidArgument("column '" + col.name + "' contains code " +
                            std::to_string(c) + " outside its label table");
    }
  }
}

/// Appends values to a column, assigning codes by first appearance.
class ColumnBuilder {
 public:
  explicit ColumnBuilder(std::string name) { col_.name = std::move(name); }

  void add(const std::string& label) {
    auto [it, inserted] = code_of_.try_emplace(label, next_code_);
    if (inserted) {
      col_.labels.push_back(label);
      ++next_code_;
    }
    col_.codes.push_back(it->second);
  }

  Column take() { return std::move(col_); }

 private:
  Column col_;
  std::unordered_map<std::string, Code> code_of_;
  Code next_code_ = 0;
};

}  // namespace

DiscreteDataset::DiscreteDataset(std::vector<Column> features, Column target)
    : features_(std::move(features)),
      target_(std::move(target)),
      n_samples_(target_.codes.size()) {
  if (n_samples_ == 0) {
    throw InvalidArgument("dataset must contain at least one row");
  }
  validate_column(target_, n_samples_);
  std::unordered_set<std::string> seen{target_.name};
  for (const Column& col : features_) {
    validate_column(col, n_samples_);
    if (!seen.insert(col.name).second) {
      throw InvalidArgument("duplicate column name '" + col.name + "'");
    }
  }
}

std::vector<std::string> DiscreteDataset::feature_names() const {
  std::vector<std::string> names;
  names.reserve(features_.size());
  for (const Column& col : features_) names.push_back(col.name);
  return names;
}

std::optional<std::size_t> DiscreteDataset::feature_index(
    std::string_view name) const {
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (features_[i].name == name) return i;
  }
  return std::nullopt;
}

DiscreteDataset materialize(const SyntheticSpec& spec) {
  if (spec.column_names.empty()) {
    throw InvalidArgument("spec needs at least a target column");
  }
  if (spec.total_samples <= 0) {
    throw InvalidArgument("total_samples must be positive");
  }

  // Weights must be nonnegative and sum to exactly one.
  long long acc_num = 0;
  long long acc_den = 1;
  for (const auto& outcome : spec.outcome_table) {
    if (outcome.values.size() != spec.column_names.size()) {
      throw InvalidArgument("outcome arity does not match column count");
    }
    const auto [num, den] = outcome.weight;
    if (den <= 0 || num < 0) {
      throw InvalidArgument("outcome weights must be nonnegative rationals");
    }
    acc_num = acc_num * den + num * acc_den;
    acc_den *= den;
    const long long g = std::gcd(acc_num, acc_den);
    acc_num /= g;
    acc_den /= g;
  }
  if (acc_num != acc_den) {
    throw InvalidArgument("outcome weights must sum to one");
  }

  std::vector<ColumnBuilder> builders;
  builders.reserve(spec.column_names.size());
  for (const std::string& name : spec.column_names) {
    builders.emplace_back(name);
  }

  for (const auto& outcome : spec.outcome_table) {
    const auto [num, den] = outcome.weight;
    const long long scaled = num * spec.total_samples;
    if (scaled % den != 0) {
      throw InfeasibleDraw("weight " + std::to_string(num) + "/" +
                           std::to_string(den) + " times " +
                           std::to_string(spec.total_samples) +
                           " samples is not an integer");
    }
    const long long copies = scaled / den;
    for (long long rep = 0; rep < copies; ++rep) {
      for (std::size_t c = 0; c < outcome.values.size(); ++c) {
        builders[c].add(std::to_string(outcome.values[c]));
      }
    }
  }

  std::vector<Column> features;
  features.reserve(builders.size() - 1);
  for (std::size_t c = 0; c + 1 < builders.size(); ++c) {
    features.push_back(builders[c].take());
  }
  return DiscreteDataset(std::move(features), builders.back().take());
}

std::vector<Code> bin_column(const std::vector<double>& raw,
                             const BinningRule& rule) {
  if (raw.empty()) {
    throw EmptyColumn("cannot bin an empty column");
  }
  if (rule.bin_count < 1) {
    throw InvalidArgument("bin_count must be at least 1");
  }
  for (double v : raw) {
    if (!std::isfinite(v)) {
      throw NonFiniteValue("column '" + rule.column +
                           "' contains a non-finite value");
    }
  }

  const std::size_t n = raw.size();
  const auto k = static_cast<std::size_t>(rule.bin_count);
  std::vector<Code> codes(n);

  if (rule.strategy == BinningStrategy::kEqualWidth) {
    const auto [lo_it, hi_it] = std::minmax_element(raw.begin(), raw.end());
    const double lo = *lo_it;
    const double width = *hi_it - lo;
    if (width == 0.0) {
      return codes;  // constant column: everything in bin 0
    }
    for (std::size_t i = 0; i < n; ++i) {
      auto bin = static_cast<long long>((raw[i] - lo) / width * double(k));
      bin = std::clamp<long long>(bin, 0, static_cast<long long>(k) - 1);
      codes[i] = static_cast<Code>(bin);
    }
    return codes;
  }

  // Equal frequency: rank rows by value (stable, so ties keep row order) and
  // cut the ranking into k near-equal runs.
  std::size_t distinct = [&] {
    std::vector<double> sorted(raw);
    std::sort(sorted.begin(), sorted.end());
    return static_cast<std::size_t>(
        std::unique(sorted.begin(), sorted.end()) - sorted.begin());
  }();
  if (k > distinct) {
    throw InvalidArgument("bin_count " + std::to_string(k) + " exceeds " +
                          std::to_string(distinct) + " distinct values");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return raw[a] < raw[b]; });
  for (std::size_t rank = 0; rank < n; ++rank) {
    codes[order[rank]] = static_cast<Code>(rank * k / n);
  }
  return codes;
}

DiscreteDataset restrict(const DiscreteDataset& ds,
                         const std::vector<std::string>& subset) {
  std::unordered_set<std::string> wanted(subset.begin(), subset.end());
  for (const std::string& name : subset) {
    if (!ds.feature_index(name)) {
      throw UnknownFeature("no feature named '" + name + "'");
    }
  }
  std::vector<Column> kept;
  for (const Column& col : ds.features()) {
    if (wanted.count(col.name)) kept.push_back(col);
  }
  return DiscreteDataset(std::move(kept), ds.target());
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line,
                                        std::size_t line_no) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += ch;
      }
    } else if (ch == '"' && cell.empty()) {
      quoted = true;
    } else if (ch == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else {
      cell += ch;
    }
  }
  if (quoted) {
    throw CsvError("unterminated quote on line " + std::to_string(line_no));
  }
  cells.push_back(std::move(cell));
  return cells;
}

double parse_number(const std::string& cell, const std::string& column,
                    std::size_t line_no) {
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(cell, &consumed);
  } catch (const std::exception&) {
    consumed = 0;
  }
  if (consumed != cell.size() || cell.empty()) {
    throw CsvError("column '" + column + "' line " + std::to_string(line_no) +
                   ": '" + cell + "' is not a number");
  }
  return value;
}

}  // namespace

DiscreteDataset read_csv(std::istream& in, const std::string& target_name,
                         const std::vector<BinningRule>& rules) {
  std::string line;
  if (!std::getline(in, line)) {
    throw CsvError("missing header row");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_csv_line(line, 1);

  std::vector<std::vector<std::string>> cells_by_col(header.size());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells = split_csv_line(line, line_no);
    if (cells.size() != header.size()) {
      throw CsvError("line " + std::to_string(line_no) + " has " +
                     std::to_string(cells.size()) + " cells, expected " +
                     std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      cells_by_col[c].push_back(std::move(cells[c]));
    }
  }
  if (cells_by_col.empty() || cells_by_col[0].empty()) {
    throw CsvError("no data rows");
  }

  auto find_rule = [&rules](const std::string& name) -> const BinningRule* {
    for (const BinningRule& r : rules) {
      if (r.column == name) return &r;
    }
    return nullptr;
  };

  bool target_seen = false;
  std::vector<Column> features;
  Column target;
  for (std::size_t c = 0; c < header.size(); ++c) {
    Column col;
    if (const BinningRule* rule = find_rule(header[c])) {
      std::vector<double> numeric;
      numeric.reserve(cells_by_col[c].size());
      for (std::size_t r = 0; r < cells_by_col[c].size(); ++r) {
        numeric.push_back(parse_number(cells_by_col[c][r], header[c], r + 2));
      }
      col.name = header[c];
      col.codes = bin_column(numeric, *rule);
      const Code max_code =
          *std::max_element(col.codes.begin(), col.codes.end());
      for (Code b = 0; b <= max_code; ++b) {
        col.labels.push_back("bin" + std::to_string(b));
      }
    } else {
      ColumnBuilder builder(header[c]);
      for (const std::string& cell : cells_by_col[c]) builder.add(cell);
      col = builder.take();
    }
    if (header[c] == target_name) {
      target = std::move(col);
      target_seen = true;
    } else {
      features.push_back(std::move(col));
    }
  }
  if (!target_seen) {
    throw UnknownFeature("target column '" + target_name + "' not in header");
  }
  return DiscreteDataset(std::move(features), std::move(target));
}

namespace {

void write_cell(std::ostream& out, const std::string& label) {
  if (label.find_first_of(",\"\n") == std::string::npos) {
    out << label;
    return;
  }
  out << '"';
  for (char ch : label) {
    if (ch == '"') out << '"';
    out << ch;
  }
  out << '"';
}

}  // namespace

void write_csv(const DiscreteDataset& ds, std::ostream& out) {
  for (const Column& col : ds.features()) {
    write_cell(out, col.name);
    out << ',';
  }
  write_cell(out, ds.target().name);
  out << '\n';
  for (std::size_t r = 0; r < ds.n_samples(); ++r) {
    for (const Column& col : ds.features()) {
      write_cell(out, col.labels[col.codes[r]]);
      out << ',';
    }
    write_cell(out, ds.target().labels[ds.target().codes[r]]);
    out << '\n';
  }
}

}  // namespace depfi
