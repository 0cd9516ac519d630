#include "nefb/feature_space.hpp"

#include <algorithm>
#include <numeric>

#include "nefb/errors.hpp"

namespace nefb {

DenseFeatures::DenseFeatures(const Matrix& x) : rows_(x.rows()), cols_(x.cols()) {
  if (rows_ > UINT32_MAX) throw ArgumentError("too many instances for 32-bit instance ids");
  columns_.resize(rows_ * cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    const auto row = x.row(i);
    for (std::size_t j = 0; j < cols_; ++j) columns_[j * rows_ + i] = row[j];
  }
  order_.resize(rows_ * cols_);
  for (std::size_t j = 0; j < cols_; ++j) {
    auto first = order_.begin() + static_cast<std::ptrdiff_t>(j * rows_);
    auto last = first + static_cast<std::ptrdiff_t>(rows_);
    std::iota(first, last, 0u);
    const double* col = columns_.data() + j * rows_;
    std::stable_sort(first, last, [col](std::uint32_t a, std::uint32_t b) { return col[a] < col[b]; });
  }
  sorted_.resize(rows_ * cols_);
  for (std::size_t k = 0; k < sorted_.size(); ++k) sorted_[k] = columns_[(k / rows_) * rows_ + order_[k]];
}

void DenseFeatures::draw_candidates(std::size_t count, Rng& rng, std::vector<FeatureId>& out) const {
  out.clear();
  if (count == 0 || count >= cols_) {
    out.resize(cols_);
    std::iota(out.begin(), out.end(), FeatureId{0});
    return;
  }
  std::vector<FeatureId> pool(cols_);
  std::iota(pool.begin(), pool.end(), FeatureId{0});
  for (std::size_t k = 0; k < count; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, cols_ - 1);
    std::swap(pool[k], pool[pick(rng)]);
  }
  out.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count));
  std::sort(out.begin(), out.end());
}

SortedColumn DenseFeatures::sorted_node_values(FeatureId feature, const NodeMembers& node,
                                               std::vector<std::uint32_t>& order,
                                               std::vector<double>& values) const {
  const std::uint32_t* sorted = order_.data() + feature * rows_;
  const double* sorted_values = sorted_.data() + feature * rows_;
  if (node.all) return {{sorted, rows_}, {sorted_values, rows_}};
  // One spare slot lets the filter store unconditionally.
  order.resize(node.members.size() + 1);
  values.resize(node.members.size() + 1);
  const std::int32_t* tags = node.node_of.data();
  const std::int32_t tag = node.tag;
  std::size_t out = 0;
  for (std::size_t k = 0; k < rows_; ++k) {
    const std::uint32_t i = sorted[k];
    order[out] = i;
    values[out] = sorted_values[k];
    out += tags[i] == tag ? 1 : 0;
  }
  return {{order.data(), out}, {values.data(), out}};
}

}  // namespace nefb
