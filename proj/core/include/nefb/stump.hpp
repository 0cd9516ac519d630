#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "nefb/dataset.hpp"
#include "nefb/feature_space.hpp"
#include "nefb/matrix.hpp"

namespace nefb {

/// Threshold of the constant stump: phi(x) = +1 for every x.
inline constexpr double kAlwaysPositive = -std::numeric_limits<double>::infinity();

/// Multi-class decision stump h(x) = v * phi(x), phi(x) = +1 iff x[feature] >= threshold.
struct Stump {
  FeatureId feature = 0;
  double threshold = kAlwaysPositive;
  std::vector<std::int8_t> votes;

  int phi(double value) const { return value >= threshold ? 1 : -1; }
  bool constant() const { return threshold == kAlwaysPositive; }

  friend bool operator==(const Stump&, const Stump&) = default;
};

/// gamma = sum_i sum_l w(i,l) h(i,l) y(i,l). `h` is row-major n x K with ±1 entries.
double edge_of(std::span<const std::int8_t> h, const Matrix& w, const LabelCode& y);

/// Row-major n x K products w(i,l) * y(i,l), the only view of (W, Y) the
/// split search needs.
std::vector<double> weighted_codes(const Matrix& w, const LabelCode& y);

struct StumpFit {
  Stump stump;
  double edge = 0.0;           ///< sum_l |gamma_l| over the node
  std::vector<double> gamma;   ///< per-class gamma_l of phi over the node
};

/// Exhaustive split search over a node.
///
/// For every candidate feature, thresholds are midpoints between consecutive
/// distinct values among the node's members; the constant stump is always a
/// candidate. The stump maximizing sum_l |gamma_l| wins: first found among
/// equal real splits, and a real split over the constant stump on an exact
/// tie. Votes are sign(gamma_l) with sign(0) = +1.
class StumpSearch {
 public:
  StumpSearch(const TrainingFeatureSpace& space, std::size_t classes);

  StumpFit best(const NodeMembers& node, std::span<const double> codes,
                std::span<const FeatureId> candidates);

 private:
  const TrainingFeatureSpace* space_;
  std::size_t classes_;
  std::vector<double> mass_;  // per-instance sum_l |codes(i, l)| of the current node
};

/// Convenience: search all rows of `x` over `candidates` (column indices).
StumpFit learn_stump(const Matrix& x, const Matrix& w, const LabelCode& y,
                     std::span<const std::size_t> candidates);

}  // namespace nefb
