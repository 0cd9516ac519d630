#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "nefb/matrix.hpp"

namespace nefb {

using FeatureId = std::uint64_t;
using Rng = std::mt19937_64;

/// Read access to feature values of a fixed instance set.
class FeatureView {
 public:
  virtual ~FeatureView() = default;
  virtual std::size_t instance_count() const = 0;
  virtual double value(FeatureId feature, std::size_t instance) const = 0;
};

/// Instances currently sitting in one tree node.
///
/// `node_of[i] == tag` marks membership; `members` lists the same instances in
/// ascending order. `all` short-circuits the test for the root.
struct NodeMembers {
  std::span<const std::uint32_t> members;
  std::span<const std::int32_t> node_of;
  std::int32_t tag = 0;
  bool all = false;

  bool contains(std::uint32_t i) const { return all || node_of[i] == tag; }
};

/// A node's members in ascending feature value, with the values themselves.
/// The spans point either into the space's own storage or into the caller's buffers.
struct SortedColumn {
  std::span<const std::uint32_t> order;
  std::span<const double> values;
};

/// Feature space a booster can search: draws candidate features for a split
/// and lists a node's members ordered by feature value.
class TrainingFeatureSpace : public FeatureView {
 public:
  /// Number of distinct candidate features.
  virtual std::uint64_t feature_count() const = 0;

  /// Replaces `out` with `count` candidates drawn without replacement; when
  /// count >= feature_count() every feature is returned in index order.
  virtual void draw_candidates(std::size_t count, Rng& rng, std::vector<FeatureId>& out) const = 0;

  /// Node members in ascending feature value (ties in ascending instance id).
  /// `order_buffer` and `value_buffer` are scratch space the result may live in.
  virtual SortedColumn sorted_node_values(FeatureId feature, const NodeMembers& node,
                                          std::vector<std::uint32_t>& order_buffer,
                                          std::vector<double>& value_buffer) const = 0;
};

/// Materialized columns with a presorted instance order per column.
class DenseFeatures final : public TrainingFeatureSpace {
 public:
  explicit DenseFeatures(const Matrix& x);

  std::size_t instance_count() const override { return rows_; }
  double value(FeatureId feature, std::size_t instance) const override {
    return columns_[feature * rows_ + instance];
  }
  std::uint64_t feature_count() const override { return cols_; }
  void draw_candidates(std::size_t count, Rng& rng, std::vector<FeatureId>& out) const override;
  SortedColumn sorted_node_values(FeatureId feature, const NodeMembers& node, std::vector<std::uint32_t>& order_buffer,
                                  std::vector<double>& value_buffer) const override;

  std::span<const double> column(std::size_t c) const { return {columns_.data() + c * rows_, rows_}; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> columns_;       // column-major
  std::vector<std::uint32_t> order_;  // per column, ascending value
  std::vector<double> sorted_;        // column values in `order_`
};

/// Row-major matrix viewed column-by-feature; no presorting.
class MatrixView final : public FeatureView {
 public:
  explicit MatrixView(const Matrix& x) : x_(&x) {}
  std::size_t instance_count() const override { return x_->rows(); }
  double value(FeatureId feature, std::size_t instance) const override { return (*x_)(instance, feature); }

 private:
  const Matrix* x_;
};

}  // namespace nefb
