#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "depfi/errors.hpp"

namespace depfi {

/// Dense categorical code. Codes index into the owning column's label table.
using Code = std::int32_t;

/// A named column of categorical codes plus the label each code stands for.
struct Column {
  std::string name;
  std::vector<Code> codes;
  std::vector<std::string> labels;  // labels[c] is the raw value of code c
};

/// Immutable discrete table: ordered feature columns plus one target column.
/// All columns share the same positive row count; feature names are unique
/// and distinct from the target name; every code has a label.
class DiscreteDataset {
 public:
  DiscreteDataset(std::vector<Column> features, Column target);

  std::size_t n_samples() const { return n_samples_; }
  std::size_t feature_count() const { return features_.size(); }
  const Column& feature(std::size_t index) const { return features_.at(index); }
  const std::vector<Column>& features() const { return features_; }
  const Column& target() const { return target_; }

  std::vector<std::string> feature_names() const;
  std::optional<std::size_t> feature_index(std::string_view name) const;

 private:
  std::vector<Column> features_;
  Column target_;
  std::size_t n_samples_;
};

/// Exact nonnegative weight for a synthetic outcome row.
struct Rational {
  long long num = 0;
  long long den = 1;
};

/// Declarative recipe for a deterministic dataset: a joint outcome table with
/// exact weights that sum to one, expanded by repeating each outcome exactly
/// weight * total_samples times.
struct SyntheticSpec {
  struct Outcome {
    std::vector<long long> values;  // one entry per column, target last
    Rational weight;
  };

  std::vector<std::string> column_names;  // features in order, target last
  std::vector<Outcome> outcome_table;
  long long total_samples = 0;
};

/// Expands the outcome table row by row, in order, repeating each outcome
/// contiguously. Codes are assigned by first appearance, so equal
/// specifications produce byte-identical datasets.
/// Throws InfeasibleDraw when any weight * total_samples is non-integral,
/// InvalidArgument when the weights do not sum to one.
DiscreteDataset materialize(const SyntheticSpec& spec);

enum class BinningStrategy { kEqualWidth, kEqualFrequency };

/// How to discretize one numeric raw column.
struct BinningRule {
  std::string column;
  BinningStrategy strategy = BinningStrategy::kEqualWidth;
  int bin_count = 1;
};

/// Discretizes a numeric column into codes 0..bin_count-1.
/// Equal width splits [min, max] into half-open intervals with the last one
/// closed; a constant column maps everything to bin 0. Equal frequency
/// assigns near-equal counts in value order with ties broken by row order.
/// Throws EmptyColumn, NonFiniteValue, InvalidArgument.
std::vector<Code> bin_column(const std::vector<double>& raw,
                             const BinningRule& rule);

/// Returns the dataset reduced to the named features (original column order
/// preserved); the target is untouched. Throws UnknownFeature.
DiscreteDataset restrict(const DiscreteDataset& ds,
                         const std::vector<std::string>& subset);

/// Reads a comma-separated stream: first row is the header, every cell is
/// dictionary-encoded by first appearance. Columns named by a binning rule
/// are instead parsed as numbers and discretized. Throws CsvError,
/// UnknownFeature (missing target), EmptyColumn, NonFiniteValue.
DiscreteDataset read_csv(std::istream& in, const std::string& target_name,
                         const std::vector<BinningRule>& rules = {});

/// Writes header plus one row per sample. Labels containing a comma, quote,
/// or newline are double-quoted; catalog labels never need quoting, keeping
/// exported bytes canonical.
void write_csv(const DiscreteDataset& ds, std::ostream& out);

}  // namespace depfi
