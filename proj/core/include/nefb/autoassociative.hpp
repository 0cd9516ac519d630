#pragma once

#include <cstddef>
#include <vector>

#include "nefb/dataset.hpp"
#include "nefb/matrix.hpp"

namespace nefb {

/// Multi-label targets: entry (i, l) is +1 iff x(i, l) > median of column l.
LabelCode median_split_targets(const Matrix& x);

struct AutoassociativeResult {
  /// Distinct input features of the chosen stumps, in first-pick order.
  std::vector<std::size_t> selected;
  /// Input feature of every iteration's stump (constant stumps included).
  std::vector<std::size_t> picks;
  std::vector<double> edges;
  /// Iterations won by the constant stump; those select no feature.
  std::size_t constant_stumps = 0;
};

/// Boosts single-feature stumps that predict every (binarized) feature from
/// one input feature, for `iterations` rounds, with uniform initial weights.
/// Throws NumericError if every column is constant.
AutoassociativeResult autoassociative_select(const Matrix& x_sub, std::size_t iterations);

}  // namespace nefb
