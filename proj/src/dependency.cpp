#include "depfi/dependency.hpp"

#include <cstdlib>
#include <unordered_map>
#include <vector>

namespace depfi {

namespace {

using Int = __int128;  // counts and cross products stay exact at any n

struct UdCounts {
  Int numerator = 0;    // sum_{x,y} |n*n_xy - n_x*n_y|, scale n^2
  Int denominator = 0;  // n^2
};

void check_mask(const DiscreteDataset& ds, std::uint64_t mask) {
  const std::size_t m = ds.feature_count();
  if (m < 64 && (mask >> m) != 0) {
    throw InvalidArgument("subset mask references features beyond the dataset");
  }
}

/// Group id per row for the joint value of the masked features, assigned by
/// first appearance. Refines one feature at a time, so cost is rows * bits.
std::vector<std::int64_t> group_rows(const DiscreteDataset& ds,
                                     std::uint64_t mask,
                                     std::size_t* group_count) {
  const std::size_t n = ds.n_samples();
  std::vector<std::int64_t> group(n, 0);
  *group_count = 1;
  for (std::size_t i = 0; i < ds.feature_count() && i < 64; ++i) {
    if (!(mask >> i & 1)) continue;
    const Column& col = ds.feature(i);
    const auto card = static_cast<std::uint64_t>(col.labels.size());
    std::unordered_map<std::uint64_t, std::int64_t> remap;
    remap.reserve(*group_count * 2);
    std::int64_t next = 0;
    for (std::size_t r = 0; r < n; ++r) {
      const std::uint64_t key =
          static_cast<std::uint64_t>(group[r]) * card +
          static_cast<std::uint64_t>(col.codes[r]);
      auto [it, inserted] = remap.try_emplace(key, next);
      if (inserted) ++next;
      group[r] = it->second;
    }
    *group_count = static_cast<std::size_t>(next);
  }
  return group;
}

/// Exact integer evaluation over the scale n^2:
///   sum_{x,y} |n*n_xy - n_x*n_y|
///     = n^2 + sum_{n_xy > 0} (|n*n_xy - n_x*n_y| - n_x*n_y)
/// because the zero-count pairs contribute n_x*n_y and all pairs together
/// contribute sum n_x * sum n_y = n^2.
UdCounts ud_counts(const DiscreteDataset& ds, std::uint64_t mask) {
  const auto n = static_cast<std::int64_t>(ds.n_samples());
  UdCounts out;
  out.denominator = Int(n) * n;
  if (mask == 0) {
    out.numerator = 0;
    return out;
  }

  std::size_t group_count = 0;
  const std::vector<std::int64_t> group = group_rows(ds, mask, &group_count);
  const Column& target = ds.target();
  const std::size_t y_card = target.labels.size();

  std::vector<std::int64_t> n_x(group_count, 0);
  std::vector<std::int64_t> n_y(y_card, 0);
  for (std::size_t r = 0; r < ds.n_samples(); ++r) {
    ++n_x[static_cast<std::size_t>(group[r])];
    ++n_y[static_cast<std::size_t>(target.codes[r])];
  }

  Int acc = Int(n) * n;
  auto add_pair = [&](std::size_t gx, std::size_t y, std::int64_t joint) {
    const Int cross = Int(n_x[gx]) * n_y[y];
    Int dev = Int(n) * joint - cross;
    if (dev < 0) dev = -dev;
    acc += dev - cross;
  };

  const std::size_t cells = group_count * y_card;
  if (cells / y_card == group_count && cells <= (std::size_t{1} << 24)) {
    std::vector<std::int64_t> n_xy(cells, 0);
    for (std::size_t r = 0; r < ds.n_samples(); ++r) {
      ++n_xy[static_cast<std::size_t>(group[r]) * y_card +
             static_cast<std::size_t>(target.codes[r])];
    }
    for (std::size_t gx = 0; gx < group_count; ++gx) {
      for (std::size_t y = 0; y < y_card; ++y) {
        const std::int64_t joint = n_xy[gx * y_card + y];
        if (joint > 0) add_pair(gx, y, joint);
      }
    }
  } else {
    std::unordered_map<std::uint64_t, std::int64_t> n_xy;
    n_xy.reserve(ds.n_samples());
    for (std::size_t r = 0; r < ds.n_samples(); ++r) {
      const std::uint64_t key =
          static_cast<std::uint64_t>(group[r]) * y_card +
          static_cast<std::uint64_t>(target.codes[r]);
      ++n_xy[key];
    }
    for (const auto& [key, joint] : n_xy) {
      add_pair(static_cast<std::size_t>(key / y_card),
               static_cast<std::size_t>(key % y_card), joint);
    }
  }
  out.numerator = acc;
  return out;
}

/// sum_y p(y) * sum_{y'} |1{y'=y} - p(y')| = 2*(n^2 - sum_y n_y^2) / n^2.
UdCounts ud_self_counts(const DiscreteDataset& ds) {
  const auto n = static_cast<std::int64_t>(ds.n_samples());
  const Column& target = ds.target();
  std::vector<std::int64_t> n_y(target.labels.size(), 0);
  for (Code c : target.codes) ++n_y[static_cast<std::size_t>(c)];
  Int squares = 0;
  for (std::int64_t c : n_y) squares += Int(c) * c;
  UdCounts out;
  out.denominator = Int(n) * n;
  out.numerator = 2 * (out.denominator - squares);
  return out;
}

}  // namespace

double ud(const DiscreteDataset& ds, std::uint64_t subset_mask) {
  check_mask(ds, subset_mask);
  const UdCounts counts = ud_counts(ds, subset_mask);
  return static_cast<double>(counts.numerator) /
         static_cast<double>(counts.denominator);
}

double ud_self(const DiscreteDataset& ds) {
  const UdCounts counts = ud_self_counts(ds);
  return static_cast<double>(counts.numerator) /
         static_cast<double>(counts.denominator);
}

double dep(const DiscreteDataset& ds, std::uint64_t subset_mask) {
  return dep_detail(ds, subset_mask).value;
}

DependencyValue dep_detail(const DiscreteDataset& ds,
                           std::uint64_t subset_mask) {
  check_mask(ds, subset_mask);
  const UdCounts self = ud_self_counts(ds);
  if (self.numerator == 0) {
    throw DependencyUndefined(
        "target is almost surely constant; the dependency ratio is undefined");
  }
  const UdCounts counts = ud_counts(ds, subset_mask);
  DependencyValue out;
  out.subset = subset_mask;
  // Both deviations share the n^2 scale, so the ratio of raw integers is the
  // dependency value with a single rounding.
  out.value = static_cast<double>(counts.numerator) /
              static_cast<double>(self.numerator);
  out.ud_numerator = static_cast<double>(counts.numerator) /
                     static_cast<double>(counts.denominator);
  out.ud_denominator = static_cast<double>(self.numerator) /
                       static_cast<double>(self.denominator);
  return out;
}

}  // namespace depfi
