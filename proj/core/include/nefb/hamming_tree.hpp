#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nefb/dataset.hpp"
#include "nefb/feature_space.hpp"
#include "nefb/stump.hpp"

namespace nefb {

/// Binary tree of stumps. Inner nodes route with phi only (+1 left, -1 right);
/// the reached leaf outputs its full v * phi(x).
class HammingTree {
 public:
  struct Node {
    Stump stump;
    std::int32_t left = -1;
    std::int32_t right = -1;

    bool leaf() const { return left < 0; }
    friend bool operator==(const Node&, const Node&) = default;
  };

  HammingTree() = default;
  explicit HammingTree(std::vector<Node> nodes);

  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t leaf_count() const;
  std::size_t classes() const { return nodes_.empty() ? 0 : nodes_.front().stump.votes.size(); }

  struct Route {
    std::size_t leaf = 0;
    int phi = 1;
  };
  Route route(const FeatureView& view, std::size_t instance) const;

  /// Writes the K outputs in {-1, +1} for one instance.
  void predict(const FeatureView& view, std::size_t instance, std::span<std::int8_t> out) const;
  std::vector<std::int8_t> predict(const FeatureView& view, std::size_t instance) const;

  /// Distinct features used by any node, ascending.
  std::vector<FeatureId> features() const;

  friend bool operator==(const HammingTree&, const HammingTree&) = default;

 private:
  std::vector<Node> nodes_;
};

struct TreeConfig {
  std::size_t leaves = 1;
  /// Candidate features drawn per node; 0 means all.
  std::size_t candidates_per_split = 0;
};

struct TreeFit {
  HammingTree tree;
  double edge = 0.0;
  /// Tree edge after the root and after each accepted split.
  std::vector<double> edge_trace;
  /// Reached leaf and phi per training instance.
  std::vector<std::int32_t> leaf_of;
  std::vector<std::int8_t> phi_of;

  /// Row-major n x K outputs on the training set.
  std::vector<std::int8_t> outputs() const;
};

/// Best-first greedy growth: the root is a single stump; each step replaces
/// the leaf whose split (its stump's phi routing to two freshly fitted child
/// stumps) increases the tree edge most. Stops at `leaves` leaves or when no
/// split gives a positive increase. Candidates are redrawn for every node.
TreeFit learn_tree(const TrainingFeatureSpace& space, std::span<const double> codes,
                   std::size_t classes, const TreeConfig& config, Rng& rng);

/// Convenience over a dense matrix.
TreeFit learn_tree(const Matrix& x, const Matrix& w, const LabelCode& y, const TreeConfig& config,
                   std::uint64_t seed);

}  // namespace nefb
