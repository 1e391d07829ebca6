#include "depfi/catalog.hpp"

#include <array>
#include <functional>

namespace depfi {

namespace {

using Values = std::vector<long long>;
using Pairs = std::vector<std::pair<int, int>>;

SyntheticSpec grid_spec(std::vector<std::string> names,
                        const std::vector<Values>& rows, long long num,
                        long long den, long long total) {
  SyntheticSpec spec;
  spec.column_names = std::move(names);
  spec.total_samples = total;
  spec.outcome_table.reserve(rows.size());
  for (const Values& row : rows) {
    spec.outcome_table.push_back({row, {num, den}});
  }
  return spec;
}

/// Datasets 1-5: three uniform bits, target is their 3-bit number, plus a
/// clone of the first bit and bijective powers of the target.
SyntheticSpec binary_system(int variant) {
  std::vector<Values> rows;
  for (long long x1 = 0; x1 <= 1; ++x1) {
    for (long long x2 = 0; x2 <= 1; ++x2) {
      for (long long x3 = 0; x3 <= 1; ++x3) {
        const long long y = x1 + 2 * x2 + 4 * x3;
        switch (variant) {
          case 1:
            rows.push_back({x1, x2, x3, y});
            break;
          case 2:
            rows.push_back({x1, x1, x2, x3, y});
            break;
          case 3:
            rows.push_back({x1, x1, x2, x3, y * y, y});
            break;
          case 4:
            rows.push_back({x1, x1, x2, x3, y * y, y * y * y, y});
            break;
          default:
            rows.push_back({x3, y * y, y * y * y, x1, x1, x2, y});
            break;
        }
      }
    }
  }
  static const std::array<std::vector<std::string>, 5> names = {{
      {"X1", "X2", "X3", "Y"},
      {"X1_clone", "X1", "X2", "X3", "Y"},
      {"X1_clone", "X1", "X2", "X3", "X4_full", "Y"},
      {"X1_clone", "X1", "X2", "X3", "X4_full", "X5_full", "Y"},
      {"X3", "X4_full", "X5_full", "X1_clone", "X1", "X2", "Y"},
  }};
  return grid_spec(names[variant - 1], rows, 1, 8, 1000);
}

/// Datasets 6-7: target drawn jointly uniform with the features, so every
/// conditional law equals the marginal exactly. 2000 rows cover the grid.
SyntheticSpec null_independent(bool with_constant) {
  std::vector<Values> rows;
  for (long long x1 = 0; x1 <= 1; ++x1) {
    for (long long x2 = 0; x2 <= 1; ++x2) {
      for (long long x3 = 0; x3 <= 1; ++x3) {
        for (long long y = 0; y <= 1; ++y) {
          if (with_constant) {
            rows.push_back({x1, x2, x3, 1, y});
          } else {
            rows.push_back({x1, x2, x3, y});
          }
        }
      }
    }
  }
  std::vector<std::string> names = {"X1_null_indep", "X2_null_indep",
                                    "X3_null_indep", "Y"};
  if (with_constant) {
    names.insert(names.end() - 1, "X4_const_null_indep");
  }
  return grid_spec(std::move(names), rows, 1, 16, 2000);
}

/// Datasets 8-10: target ranges over a 1000-point grid once; each feature is
/// the target snapped down onto a coarser grid. Values are grid indices:
/// index t of a k-point grid stands for t/(k-1).
SyntheticSpec increasing_bins(int id) {
  auto snap = [](long long j, long long k) { return j * (k - 1) / 999; };
  std::vector<Values> rows;
  for (long long j = 0; j < 1000; ++j) {
    switch (id) {
      case 8:
        rows.push_back({snap(j, 10), snap(j, 50), j, j});
        break;
      case 9:
        rows.push_back(
            {snap(j, 10), snap(j, 20), snap(j, 50), snap(j, 100), j, j});
        break;
      default:
        rows.push_back({j, snap(j, 50), snap(j, 10), j, j});
        break;
    }
  }
  static const std::array<std::vector<std::string>, 3> names = {{
      {"X1_bins10", "X2_bins50", "X3_bins1000_full", "Y"},
      {"X1_bins10", "X2_bins20", "X3_bins50", "X4_bins100",
       "X5_bins1000_full", "Y"},
      {"X3_bins1000_full", "X2_bins50", "X1_bins10", "X3_clone_full", "Y"},
  }};
  return grid_spec(names[id - 8], rows, 1, 1000, 1000);
}

/// Datasets 11-13: the target is the first feature; companions are either
/// independent draws or bijective powers of the target.
SyntheticSpec dependent_system(int id) {
  std::vector<Values> rows;
  if (id == 11) {
    for (long long x1 = 1; x1 <= 2; ++x1) {
      for (long long x2 = 1; x2 <= 2; ++x2) {
        for (long long x3 = 1; x3 <= 2; ++x3) {
          rows.push_back({x1, x2, x3, x1});
        }
      }
    }
    return grid_spec({"X1_full", "X2_null_indep", "X3_null_indep", "Y"}, rows,
                     1, 8, 1000);
  }
  if (id == 12) {
    for (long long x1 = 1; x1 <= 2; ++x1) {
      for (long long x3 = 1; x3 <= 2; ++x3) {
        rows.push_back({x1, x1 * x1, x3, x1});
      }
    }
    return grid_spec({"X1_full", "X2_full", "X3_null_indep", "Y"}, rows, 1, 4,
                     1000);
  }
  for (long long x1 = 1; x1 <= 2; ++x1) {
    rows.push_back({x1, x1 * x1, x1 * x1 * x1, x1});
  }
  return grid_spec({"X1_full", "X2_full", "X3_full", "Y"}, rows, 1, 2, 1000);
}

/// Datasets 14-17: exclusive-or of two uniform bits. Dataset 15 exposes only
/// the first bit; 16 adds a clone; 17 adds an independent companion.
SyntheticSpec xor_family(int id) {
  std::vector<Values> rows;
  for (long long x1 = 0; x1 <= 1; ++x1) {
    for (long long x2 = 0; x2 <= 1; ++x2) {
      const long long y = x1 ^ x2;
      switch (id) {
        case 14:
          rows.push_back({x1, x2, y});
          break;
        case 15:
          rows.push_back({x1, y});
          break;
        case 16:
          rows.push_back({x1, x1, x2, y});
          break;
        default:
          for (long long x3 : {0LL, 3LL}) {
            rows.push_back({x1, x2, x3, y});
          }
          break;
      }
    }
  }
  switch (id) {
    case 14:
      return grid_spec({"X1", "X2", "Y"}, rows, 1, 4, 1000);
    case 15:
      return grid_spec({"X1_null_indep", "Y"}, rows, 1, 4, 1000);
    case 16:
      return grid_spec({"X1_clone", "X1", "X2", "Y"}, rows, 1, 4, 1000);
    default:
      return grid_spec({"X1", "X2", "X3_null_indep", "Y"}, rows, 1, 8, 1000);
  }
}

/// Datasets 18-28: a selector S picks which feature's low bit reaches the
/// target. Feature values are Z_i + S - 1 with Z_i uniform on {0, 2}, so a
/// feature's parity reveals the selector and its high bit carries the target
/// when selected. p = (id - 18) / 10 is the probability of selecting X1.
SyntheticSpec probability_dataset(int id) {
  const long long tenths = id - 18;
  SyntheticSpec spec;
  spec.column_names = {"X1", "X2", "Y"};
  spec.total_samples = 1000;
  for (long long z1 = 0; z1 <= 2; z1 += 2) {
    for (long long z2 = 0; z2 <= 2; z2 += 2) {
      for (long long s = 1; s <= 2; ++s) {
        const long long num = s == 1 ? tenths : 10 - tenths;
        if (num == 0) continue;
        const long long y = (s == 1 ? z1 : z2) / 2;
        spec.outcome_table.push_back({{z1 + s - 1, z2 + s - 1, y}, {num, 40}});
      }
    }
  }
  return spec;
}

std::vector<CatalogEntry> build_catalog() {
  std::vector<CatalogEntry> entries;
  entries.reserve(kCatalogSize);

  auto add = [&entries](int id, std::string name, SyntheticSpec spec,
                        std::vector<double> golden, Pairs symmetric) {
    CatalogEntry entry;
    entry.id = id;
    entry.name = std::move(name);
    entry.sample_count = spec.total_samples;
    entry.spec = std::move(spec);
    entry.golden_fi = std::move(golden);
    entry.symmetric_pairs = std::move(symmetric);
    entries.push_back(std::move(entry));
  };

  add(1, "binary-system", binary_system(1), {0.333, 0.333, 0.333},
      {{0, 1}, {0, 2}, {1, 2}});
  add(2, "binary-system-clone", binary_system(2), {0.202, 0.202, 0.298, 0.298},
      {{0, 1}, {2, 3}});
  add(3, "binary-system-clone-1-full", binary_system(3),
      {0.148, 0.148, 0.183, 0.183, 0.338}, {{0, 1}, {2, 3}});
  add(4, "binary-system-clone-2-full", binary_system(4),
      {0.117, 0.117, 0.136, 0.136, 0.248, 0.248}, {{0, 1}, {2, 3}, {4, 5}});
  add(5, "binary-system-clone-2-full-reordered", binary_system(5),
      {0.136, 0.248, 0.248, 0.117, 0.117, 0.136}, {{1, 2}, {3, 4}, {0, 5}});
  add(6, "null-independent", null_independent(false), {0.0, 0.0, 0.0},
      {{0, 1}, {0, 2}, {1, 2}});
  add(7, "null-independent-constant", null_independent(true),
      {0.0, 0.0, 0.0, 0.0},
      {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  add(8, "increasing-bins", increasing_bins(8), {0.297, 0.342, 0.361}, {});
  add(9, "increasing-bins-more-variables", increasing_bins(9),
      {0.179, 0.193, 0.204, 0.208, 0.216}, {});
  add(10, "increasing-bins-clone-reordered", increasing_bins(10),
      {0.262, 0.253, 0.223, 0.262}, {{0, 3}});
  add(11, "dependent-1-full", dependent_system(11), {1.0, 0.0, 0.0}, {{1, 2}});
  add(12, "dependent-2-full", dependent_system(12), {0.5, 0.5, 0.0}, {{0, 1}});
  add(13, "dependent-3-full", dependent_system(13), {0.333, 0.333, 0.333},
      {{0, 1}, {0, 2}, {1, 2}});
  add(14, "xor", xor_family(14), {0.5, 0.5}, {{0, 1}});
  add(15, "xor-single-variable", xor_family(15), {0.0}, {});
  add(16, "xor-clone", xor_family(16), {0.167, 0.167, 0.667}, {{0, 1}});
  add(17, "xor-null-independent", xor_family(17), {0.5, 0.5, 0.0}, {{0, 1}});

  for (int id = 18; id <= 28; ++id) {
    const double p = (id - 18) / 10.0;
    const int tenths = id - 18;
    Pairs symmetric;
    if (tenths == 5) symmetric.push_back({0, 1});
    add(id, "probability-p" + std::to_string(tenths / 10) +
                std::to_string(tenths % 10),
        probability_dataset(id), {p, 1.0 - p}, std::move(symmetric));
  }
  return entries;
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = build_catalog();
  return entries;
}

}  // namespace

const CatalogEntry& catalog_entry(int id) {
  if (id < 1 || id > kCatalogSize) {
    throw UnknownDataset("dataset id " + std::to_string(id) +
                         " is not in 1.." + std::to_string(kCatalogSize));
  }
  return catalog()[static_cast<std::size_t>(id - 1)];
}

DiscreteDataset get_dataset(int id) { return materialize(catalog_entry(id).spec); }

std::vector<double> golden_fi(int id) { return catalog_entry(id).golden_fi; }

}  // namespace depfi
