#include "nefb/hamming_tree.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "nefb/errors.hpp"

namespace nefb {
namespace {

// Splits must raise the tree edge by more than this to be accepted.
constexpr double kMinGain = 1e-13;

struct Leaf {
  std::int32_t node = 0;
  std::int32_t tag = 0;
  std::vector<std::uint32_t> members;
  double edge = 0.0;

  bool evaluated = false;
  double gain = -std::numeric_limits<double>::infinity();
  StumpFit left_fit;
  StumpFit right_fit;
  std::vector<std::uint32_t> left_members;
  std::vector<std::uint32_t> right_members;
  std::int32_t left_tag = 0;
  std::int32_t right_tag = 0;
};

}  // namespace

HammingTree::HammingTree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw ArgumentError("a Hamming tree needs at least a root");
  const std::size_t k = nodes_.front().stump.votes.size();
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (n.stump.votes.size() != k) throw SchemaError("tree nodes disagree on the class count");
    if ((n.left < 0) != (n.right < 0)) throw SchemaError("tree node with a single child");
    if (!n.leaf() && (static_cast<std::size_t>(n.left) <= i || static_cast<std::size_t>(n.right) <= i ||
                      static_cast<std::size_t>(n.left) >= nodes_.size() ||
                      static_cast<std::size_t>(n.right) >= nodes_.size())) {
      throw SchemaError("tree child index out of order");
    }
  }
}

std::size_t HammingTree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.leaf(); }));
}

HammingTree::Route HammingTree::route(const FeatureView& view, std::size_t instance) const {
  std::size_t at = 0;
  while (true) {
    const Node& n = nodes_[at];
    const int phi = n.stump.phi(view.value(n.stump.feature, instance));
    if (n.leaf()) return {at, phi};
    at = static_cast<std::size_t>(phi > 0 ? n.left : n.right);
  }
}

void HammingTree::predict(const FeatureView& view, std::size_t instance, std::span<std::int8_t> out) const {
  const Route r = route(view, instance);
  const auto& votes = nodes_[r.leaf].stump.votes;
  for (std::size_t l = 0; l < votes.size(); ++l) out[l] = static_cast<std::int8_t>(votes[l] * r.phi);
}

std::vector<std::int8_t> HammingTree::predict(const FeatureView& view, std::size_t instance) const {
  std::vector<std::int8_t> out(classes());
  predict(view, instance, out);
  return out;
}

std::vector<FeatureId> HammingTree::features() const {
  std::set<FeatureId> used;
  for (const Node& n : nodes_) {
    if (!n.stump.constant()) used.insert(n.stump.feature);
  }
  return {used.begin(), used.end()};
}

std::vector<std::int8_t> TreeFit::outputs() const {
  const std::size_t k = tree.classes();
  std::vector<std::int8_t> h(leaf_of.size() * k);
  for (std::size_t i = 0; i < leaf_of.size(); ++i) {
    const auto& votes = tree.nodes()[leaf_of[i]].stump.votes;
    for (std::size_t l = 0; l < k; ++l) h[i * k + l] = static_cast<std::int8_t>(votes[l] * phi_of[i]);
  }
  return h;
}

TreeFit learn_tree(const TrainingFeatureSpace& space, std::span<const double> codes, std::size_t classes,
                   const TreeConfig& config, Rng& rng) {
  if (config.leaves < 1) throw ArgumentError("a tree needs at least one leaf");
  const std::size_t n = space.instance_count();
  if (n == 0) throw ArgumentError("cannot grow a tree on zero instances");

  StumpSearch search(space, classes);
  std::vector<std::int32_t> node_of(n, 0);
  std::vector<FeatureId> candidates;
  std::int32_t next_tag = 1;

  auto fit_node = [&](const std::vector<std::uint32_t>& members, std::int32_t tag, bool all) {
    space.draw_candidates(config.candidates_per_split, rng, candidates);
    return search.best(NodeMembers{members, node_of, tag, all}, codes, candidates);
  };

  std::vector<HammingTree::Node> nodes;
  std::vector<Leaf> leaves(1);
  leaves[0].members.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) leaves[0].members[i] = i;
  {
    StumpFit root = fit_node(leaves[0].members, 0, true);
    leaves[0].edge = root.edge;
    nodes.push_back({std::move(root.stump), -1, -1});
  }

  TreeFit fit;
  fit.edge_trace.push_back(leaves[0].edge);

  auto evaluate = [&](Leaf& leaf) {
    leaf.evaluated = true;
    const Stump& stump = nodes[leaf.node].stump;
    leaf.left_members.clear();
    leaf.right_members.clear();
    for (std::uint32_t i : leaf.members) {
      (stump.phi(space.value(stump.feature, i)) > 0 ? leaf.left_members : leaf.right_members).push_back(i);
    }
    if (leaf.left_members.empty() || leaf.right_members.empty()) return;
    leaf.left_tag = next_tag++;
    leaf.right_tag = next_tag++;
    for (std::uint32_t i : leaf.left_members) node_of[i] = leaf.left_tag;
    for (std::uint32_t i : leaf.right_members) node_of[i] = leaf.right_tag;
    leaf.left_fit = fit_node(leaf.left_members, leaf.left_tag, false);
    leaf.right_fit = fit_node(leaf.right_members, leaf.right_tag, false);
    leaf.gain = leaf.left_fit.edge + leaf.right_fit.edge - leaf.edge;
  };

  while (leaves.size() < config.leaves) {
    for (Leaf& leaf : leaves) {
      if (!leaf.evaluated) evaluate(leaf);
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < leaves.size(); ++k) {
      if (leaves[k].gain > leaves[best].gain) best = k;
    }
    if (!(leaves[best].gain > kMinGain)) break;

    Leaf parent = std::move(leaves[best]);
    const auto left_index = static_cast<std::int32_t>(nodes.size());
    nodes.push_back({std::move(parent.left_fit.stump), -1, -1});
    nodes.push_back({std::move(parent.right_fit.stump), -1, -1});
    nodes[parent.node].left = left_index;
    nodes[parent.node].right = left_index + 1;

    Leaf left;
    left.node = left_index;
    left.tag = parent.left_tag;
    left.members = std::move(parent.left_members);
    left.edge = parent.left_fit.edge;
    Leaf right;
    right.node = left_index + 1;
    right.tag = parent.right_tag;
    right.members = std::move(parent.right_members);
    right.edge = parent.right_fit.edge;

    leaves[best] = std::move(left);
    leaves.insert(leaves.begin() + static_cast<std::ptrdiff_t>(best) + 1, std::move(right));
    fit.edge_trace.push_back(fit.edge_trace.back() + parent.gain);
  }

  fit.leaf_of.assign(n, 0);
  fit.phi_of.assign(n, 1);
  fit.edge = 0.0;
  for (const Leaf& leaf : leaves) {
    const Stump& stump = nodes[leaf.node].stump;
    fit.edge += leaf.edge;
    for (std::uint32_t i : leaf.members) {
      fit.leaf_of[i] = leaf.node;
      fit.phi_of[i] = static_cast<std::int8_t>(stump.phi(space.value(stump.feature, i)));
    }
  }
  fit.tree = HammingTree(std::move(nodes));
  return fit;
}

TreeFit learn_tree(const Matrix& x, const Matrix& w, const LabelCode& y, const TreeConfig& config,
                   std::uint64_t seed) {
  if (x.rows() != w.rows()) throw SchemaError("learn_tree: X and W differ in row count");
  const DenseFeatures space(x);
  const auto codes = weighted_codes(w, y);
  Rng rng(seed);
  return learn_tree(space, codes, y.classes(), config, rng);
}

}  // namespace nefb
