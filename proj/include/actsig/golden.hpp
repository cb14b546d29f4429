#pragma once

#include <string>
#include <vector>

#include "actsig/signature.hpp"

namespace actsig {

/// One published row of Gaussian components (m1, g1, g2, m2, eta).
struct ReferenceRow {
  std::string name;
  double sigma;
  double values[5];
};

/// The 21-row reference corpus shipped with the binary (seven activations at
/// sigma in {0.5, 1, 2}), sorted by (activation, sigma).
const std::vector<ReferenceRow>& reference_table();

inline constexpr const char* kComponentNames[5] = {"m1", "g1", "g2", "m2", "eta"};

struct CellDeviation {
  std::string name;
  double sigma;
  int component;  ///< index into kComponentNames
  double computed;
  double reference;
  double deviation;  ///< |computed - reference|
};

struct ReferenceComparison {
  double max_abs_deviation = 0.0;
  CellDeviation worst{};
  int cells_compared = 0;
  int cells_within = 0;  ///< deviation < tolerance
  double tolerance = 1e-5;
  std::vector<CellDeviation> cells;
  bool passed() const { return cells_compared > 0 && cells_within == cells_compared; }
};

/// Compares computed rows with matching (name, sigma) reference rows.
ReferenceComparison compare_to_reference(const std::vector<ComponentRow>& rows, double tolerance = 1e-5);

}  // namespace actsig
