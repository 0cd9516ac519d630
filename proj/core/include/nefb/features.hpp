#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "nefb/correlation.hpp"
#include "nefb/dataset.hpp"
#include "nefb/matrix.hpp"
#include "nefb/normalizer.hpp"

namespace nefb {

/// How a correlation qualifies a feature for membership in a neighborhood.
enum class MembershipRule {
  Signed,    ///< rho >= threshold
  Absolute,  ///< |rho| >= threshold
};

/// Unique neighborhoods over raw features.
///
/// `members[q]` holds sorted raw-feature indices; `origin[q]` records the
/// selected feature and threshold that first produced the set.
struct NeighborhoodSet {
  struct Origin {
    std::size_t feature = 0;
    double threshold = 0.0;
  };

  std::vector<std::size_t> selected;
  std::vector<double> thresholds;
  MembershipRule rule = MembershipRule::Absolute;
  std::vector<std::vector<std::size_t>> members;
  std::vector<Origin> origin;

  std::size_t size() const { return members.size(); }
};

/// Pairs (first, second) of neighborhood-feature indices with first < second.
struct EdgeSet {
  double threshold = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  std::size_t size() const { return pairs.size(); }
};

/// Builds neighborhoods from the correlation matrix of the selected raw features.
///
/// Row/column p of `c` corresponds to raw feature `selected[p]`. For every
/// selected feature (outer loop) and every threshold (inner loop, given order)
/// the member set {selected[p'] : rho(p, p') passes} is formed; identical sets
/// are kept once, at their first occurrence. Empty `selected` means all of
/// 0..c.size()-1.
NeighborhoodSet build_neighborhoods(const CorrelationMatrix& c, std::span<const double> thresholds,
                                    std::span<const std::size_t> selected = {},
                                    MembershipRule rule = MembershipRule::Absolute);

/// z(i, q) = mean of x(i, j) over j in members[q]. `x` has raw width.
Matrix neighborhood_features(const Matrix& x, const NeighborhoodSet& neighborhoods);

/// All pairs first < second with rho(z_first, z_second) >= rho_e.
EdgeSet build_edges(const CorrelationMatrix& cz, double rho_e);

/// s(i, e) = z(i, first_e) - z(i, second_e).
Matrix edge_features(const Matrix& z, const EdgeSet& edges);

struct TransformConfig {
  std::size_t subsample_size = 1000;
  std::uint64_t seed = 1;
  std::vector<double> neighborhood_thresholds{0.5};
  double edge_threshold = 0.7;
  MembershipRule rule = MembershipRule::Absolute;
  bool normalize = false;
  /// Raw features the neighborhoods are built around; empty means all.
  std::vector<std::size_t> selected;
};

/// Fitted, label-blind feature map raw x -> (z_1..z_q, s_1..s_L).
struct FeatureTransform {
  std::size_t raw_dimension = 0;
  std::optional<Normalizer> normalizer;
  NeighborhoodSet neighborhoods;
  EdgeSet edges;
  TransformConfig config;
  std::optional<ImageGeometry> geometry;

  std::size_t output_dimension() const { return neighborhoods.size() + edges.size(); }
  bool is_edge_column(std::size_t column) const { return column >= neighborhoods.size(); }
};

/// Subsample -> (normalize) -> correlation -> neighborhoods -> neighborhood
/// features on the subsample -> their correlation -> edges.
/// The normalizer, when enabled, is fitted on all rows of `x`.
FeatureTransform fit_transform(const Matrix& x, const TransformConfig& config,
                               std::optional<ImageGeometry> geometry = std::nullopt);

Matrix apply_transform(const FeatureTransform& transform, const Matrix& raw);

}  // namespace nefb
