#pragma once

#include <string>
#include <utility>
#include <vector>

#include "depfi/dataset.hpp"

namespace depfi {

inline constexpr int kCatalogSize = 28;

/// One built-in benchmark dataset: a deterministic recipe, the published
/// importance vector it must reproduce (3 decimals), and the feature pairs
/// that are symmetric by construction.
struct CatalogEntry {
  int id = 0;
  std::string name;
  SyntheticSpec spec;
  std::vector<double> golden_fi;
  long long sample_count = 0;
  std::vector<std::pair<int, int>> symmetric_pairs;
};

/// Catalog entry for id 1..28. Throws UnknownDataset.
const CatalogEntry& catalog_entry(int id);

/// Materializes the entry's recipe; repeated calls are byte-identical.
/// Throws UnknownDataset.
DiscreteDataset get_dataset(int id);

/// The published importance vector, one value per feature, at 3 decimals.
/// Throws UnknownDataset.
std::vector<double> golden_fi(int id);

}  // namespace depfi
