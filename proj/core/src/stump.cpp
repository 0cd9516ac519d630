#include "nefb/stump.hpp"

#include <array>
#include <cmath>
#include <utility>

#include "nefb/errors.hpp"
#include "nefb/parallel.hpp"

namespace nefb {
namespace {

/// A threshold strictly between `lower` and `upper` (lower < upper) that keeps
/// `upper` on the positive side.
double threshold_between(double lower, double upper) {
  const double mid = 0.5 * (lower + upper);
  return mid > lower && mid <= upper ? mid : upper;
}

struct Best {
  double edge = -1.0;
  FeatureId feature = 0;
  double threshold = kAlwaysPositive;
  std::vector<double> gamma;
};

/// Scans one feature from its largest value down; `upper` accumulates the
/// codes of instances with x >= threshold. `Classes` is the class count when
/// known at compile time, 0 otherwise.
// Relative margin below which a bound is trusted to rule out an improvement.
constexpr double kBoundSlack = 1e-9;

/// `mass[i]` is sum_l |codes(i, l)|. Moving instance i across the threshold
/// changes the edge by at most 2 mass[i], so boundaries whose bound cannot
/// beat the best edge so far are skipped without evaluating the K-term sum.
template <std::size_t Classes>
void sweep(const SortedColumn& column, const double* codes, const double* mass, const double* total, std::size_t k,
           double* upper, double* best_upper, FeatureId feature, Best& best) {
  const std::size_t kk = Classes ? Classes : k;
  const auto values = column.values;
  const auto order = column.order;
  std::fill(upper, upper + kk, 0.0);
  double feature_edge = best.edge;
  double feature_threshold = 0.0;
  // Edge with nothing above the threshold is sum_l |total_l|.
  double last_edge = 0.0;
  for (std::size_t l = 0; l < kk; ++l) last_edge += std::abs(total[l]);
  double moved = 0.0;
  std::ptrdiff_t idx = static_cast<std::ptrdiff_t>(values.size()) - 1;
  while (idx > 0) {
    const double v = values[idx];
    do {
      const std::size_t i = order[idx];
      const double* m = codes + i * kk;
      for (std::size_t l = 0; l < kk; ++l) upper[l] += m[l];
      moved += 2.0 * mass[i];
      --idx;
    } while (idx >= 0 && values[idx] == v);
    if (idx < 0) break;
    if (last_edge + moved < feature_edge * (1.0 - kBoundSlack)) continue;
    // Four partial sums keep the reduction from serializing on one register.
    double part[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t l = 0; l < kk; ++l) part[l & 3] += std::abs(2.0 * upper[l] - total[l]);
    const double edge = (part[0] + part[1]) + (part[2] + part[3]);
    last_edge = edge;
    moved = 0.0;
    if (edge > feature_edge) {
      feature_edge = edge;
      feature_threshold = threshold_between(values[idx], v);
      std::copy(upper, upper + kk, best_upper);
    }
  }
  if (feature_edge > best.edge) {
    best.edge = feature_edge;
    best.feature = feature;
    best.threshold = feature_threshold;
    best.gamma.resize(kk);
    for (std::size_t l = 0; l < kk; ++l) best.gamma[l] = 2.0 * best_upper[l] - total[l];
  }
}

template <std::size_t Classes>
void scan_feature(const SortedColumn& column, const double* codes, const double* mass, const double* total,
                  std::size_t k, double* upper, FeatureId feature, Best& best) {
  if constexpr (Classes > 0) {
    double local[Classes] = {};
    double local_best[Classes] = {};
    sweep<Classes>(column, codes, mass, total, k, local, local_best, feature, best);
  } else {
    std::vector<double> best_upper(k);
    sweep<0>(column, codes, mass, total, k, upper, best_upper.data(), feature, best);
  }
}

using ScanFn = void (*)(const SortedColumn&, const double*, const double*, const double*, std::size_t, double*,
                        FeatureId, Best&);

template <std::size_t... Ks>
constexpr std::array<ScanFn, sizeof...(Ks)> scan_table(std::index_sequence<Ks...>) {
  return {&scan_feature<Ks>...};
}

// Entry 0 handles any class count; entries 1..32 are specialized.
constexpr auto kScanners = scan_table(std::make_index_sequence<33>{});

ScanFn scanner_for(std::size_t k) { return k < kScanners.size() ? kScanners[k] : kScanners[0]; }

}  // namespace

double edge_of(std::span<const std::int8_t> h, const Matrix& w, const LabelCode& y) {
  if (w.rows() != y.rows() || w.cols() != y.classes() || h.size() != w.rows() * w.cols()) {
    throw SchemaError("edge_of: shapes of h, W and Y disagree");
  }
  double gamma = 0.0;
  const auto wd = w.data();
  const auto yd = y.data();
  for (std::size_t c = 0; c < h.size(); ++c) gamma += wd[c] * h[c] * yd[c];
  return gamma;
}

std::vector<double> weighted_codes(const Matrix& w, const LabelCode& y) {
  if (w.rows() != y.rows() || w.cols() != y.classes()) throw SchemaError("weights and labels disagree in shape");
  std::vector<double> codes(w.data().size());
  const auto wd = w.data();
  const auto yd = y.data();
  for (std::size_t c = 0; c < codes.size(); ++c) codes[c] = yd[c] > 0 ? wd[c] : -wd[c];
  return codes;
}

StumpSearch::StumpSearch(const TrainingFeatureSpace& space, std::size_t classes)
    : space_(&space), classes_(classes) {
  if (classes_ == 0) throw ArgumentError("stump search needs at least one class");
}

StumpFit StumpSearch::best(const NodeMembers& node, std::span<const double> codes,
                           std::span<const FeatureId> candidates) {
  if (candidates.empty()) throw ArgumentError("stump search needs at least one candidate feature");
  const std::size_t k = classes_;
  if (codes.size() != space_->instance_count() * k) throw SchemaError("weighted codes do not match the feature space");

  std::vector<double> total(k, 0.0);
  mass_.resize(space_->instance_count());
  for (std::uint32_t i : node.members) {
    const double* m = codes.data() + static_cast<std::size_t>(i) * k;
    double a = 0.0;
    for (std::size_t l = 0; l < k; ++l) {
      total[l] += m[l];
      a += std::abs(m[l]);
    }
    mass_[i] = a;
  }

  Best overall;
  overall.feature = candidates.front();
  overall.gamma = total;
  overall.edge = 0.0;
  for (double t : total) overall.edge += std::abs(t);

  const std::size_t chunks = std::min(worker_count(), candidates.size());
  std::vector<Best> chunk_best(std::max<std::size_t>(chunks, 1));
  const std::size_t per_chunk = (candidates.size() + chunk_best.size() - 1) / chunk_best.size();

  const ScanFn scan = scanner_for(k);
  parallel_for(chunk_best.size(), [&](std::size_t chunk_begin, std::size_t chunk_end) {
    std::vector<std::uint32_t> order;
    std::vector<double> values;
    std::vector<double> upper(k);
    for (std::size_t chunk = chunk_begin; chunk < chunk_end; ++chunk) {
      Best& best = chunk_best[chunk];
      const std::size_t c_begin = chunk * per_chunk;
      const std::size_t c_end = std::min(candidates.size(), c_begin + per_chunk);
      for (std::size_t c = c_begin; c < c_end; ++c) {
        const SortedColumn column = space_->sorted_node_values(candidates[c], node, order, values);
        if (column.values.size() < 2 || column.values.front() == column.values.back()) continue;
        scan(column, codes.data(), mass_.data(), total.data(), k, upper.data(), candidates[c], best);
      }
    }
  });

  // Chunks hold the best real split of their candidates; a real split also wins
  // an exact tie with the constant stump, so a tree can still grow under it.
  for (const Best& b : chunk_best) {
    const bool tie_with_constant = b.edge == overall.edge && overall.threshold == kAlwaysPositive;
    if (b.edge > overall.edge || (tie_with_constant && b.edge >= 0.0)) overall = b;
  }

  StumpFit fit;
  fit.edge = overall.edge;
  fit.gamma = std::move(overall.gamma);
  fit.stump.feature = overall.feature;
  fit.stump.threshold = overall.threshold;
  fit.stump.votes.resize(k);
  for (std::size_t l = 0; l < k; ++l) fit.stump.votes[l] = fit.gamma[l] >= 0.0 ? 1 : -1;
  return fit;
}

StumpFit learn_stump(const Matrix& x, const Matrix& w, const LabelCode& y, std::span<const std::size_t> candidates) {
  if (candidates.empty()) throw ArgumentError("learn_stump: empty candidate set");
  if (x.rows() != w.rows()) throw SchemaError("learn_stump: X and W differ in row count");
  for (double v : w.data()) {
    if (v < 0.0) throw ArgumentError("learn_stump: negative weight");
  }
  const DenseFeatures space(x);
  const auto codes = weighted_codes(w, y);
  std::vector<std::uint32_t> members(x.rows());
  for (std::uint32_t i = 0; i < members.size(); ++i) members[i] = i;
  NodeMembers node{members, {}, 0, true};
  std::vector<FeatureId> ids;
  for (std::size_t c : candidates) {
    if (c >= x.cols()) throw ArgumentError("learn_stump: candidate feature out of range");
    ids.push_back(c);
  }
  StumpSearch search(space, y.classes());
  return search.best(node, codes, ids);
}

}  // namespace nefb
