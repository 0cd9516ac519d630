#include "nefb/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "nefb/errors.hpp"
#include "nefb/parallel.hpp"

namespace nefb {

NeighborhoodSet build_neighborhoods(const CorrelationMatrix& c, std::span<const double> thresholds,
                                    std::span<const std::size_t> selected, MembershipRule rule) {
  if (thresholds.empty()) throw ArgumentError("at least one neighborhood threshold is required");
  NeighborhoodSet out;
  out.rule = rule;
  out.thresholds.assign(thresholds.begin(), thresholds.end());
  if (selected.empty()) {
    out.selected.resize(c.size());
    std::iota(out.selected.begin(), out.selected.end(), 0);
  } else {
    if (selected.size() != c.size()) {
      throw SchemaError("correlation matrix covers " + std::to_string(c.size()) + " features but " +
                        std::to_string(selected.size()) + " are selected");
    }
    out.selected.assign(selected.begin(), selected.end());
  }

  // Member sets are ascending in position order; map them to raw ids after dedup.
  std::map<std::vector<std::size_t>, std::size_t> seen;
  std::vector<std::size_t> set;
  for (std::size_t p = 0; p < c.size(); ++p) {
    const auto row = c.row(p);
    for (double threshold : thresholds) {
      set.clear();
      for (std::size_t q = 0; q < c.size(); ++q) {
        const double r = rule == MembershipRule::Absolute ? std::abs(row[q]) : row[q];
        if (r >= threshold || q == p) set.push_back(out.selected[q]);
      }
      std::sort(set.begin(), set.end());
      if (seen.emplace(set, out.members.size()).second) {
        out.members.push_back(set);
        out.origin.push_back({out.selected[p], threshold});
      }
    }
  }
  return out;
}

Matrix neighborhood_features(const Matrix& x, const NeighborhoodSet& neighborhoods) {
  for (const auto& members : neighborhoods.members) {
    for (std::size_t j : members) {
      if (j >= x.cols()) throw SchemaError("neighborhood member " + std::to_string(j) + " out of range");
    }
  }
  Matrix z(x.rows(), neighborhoods.size());
  parallel_for(x.rows(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto row = x.row(i);
      for (std::size_t q = 0; q < neighborhoods.size(); ++q) {
        const auto& members = neighborhoods.members[q];
        double sum = 0.0;
        for (std::size_t j : members) sum += row[j];
        z(i, q) = sum / static_cast<double>(members.size());
      }
    }
  });
  return z;
}

EdgeSet build_edges(const CorrelationMatrix& cz, double rho_e) {
  EdgeSet edges;
  edges.threshold = rho_e;
  for (std::size_t a = 0; a < cz.size(); ++a) {
    for (std::size_t b = a + 1; b < cz.size(); ++b) {
      if (cz(a, b) >= rho_e) edges.pairs.emplace_back(a, b);
    }
  }
  return edges;
}

Matrix edge_features(const Matrix& z, const EdgeSet& edges) {
  for (const auto& [a, b] : edges.pairs) {
    if (a >= z.cols() || b >= z.cols()) throw SchemaError("edge endpoint out of range");
  }
  Matrix s(z.rows(), edges.size());
  for (std::size_t i = 0; i < z.rows(); ++i) {
    const auto row = z.row(i);
    for (std::size_t e = 0; e < edges.size(); ++e) s(i, e) = row[edges.pairs[e].first] - row[edges.pairs[e].second];
  }
  return s;
}

FeatureTransform fit_transform(const Matrix& x, const TransformConfig& config,
                               std::optional<ImageGeometry> geometry) {
  FeatureTransform t;
  t.raw_dimension = x.cols();
  t.config = config;
  t.geometry = geometry;
  for (std::size_t j : config.selected) {
    if (j >= x.cols()) throw ArgumentError("selected feature " + std::to_string(j) + " out of range");
  }

  const std::size_t m = std::min(config.subsample_size, x.rows());
  Matrix sample = subsample_instances(x, m, config.seed);
  if (config.normalize) {
    t.normalizer = fit_normalizer(x);
    t.normalizer->apply_in_place(sample);
  }

  const Matrix selected_columns = config.selected.empty() ? sample : sample.select_columns(config.selected);
  const CorrelationMatrix c = correlation_matrix(selected_columns);
  t.neighborhoods = build_neighborhoods(c, config.neighborhood_thresholds, config.selected, config.rule);

  const Matrix z = neighborhood_features(sample, t.neighborhoods);
  t.edges = build_edges(correlation_matrix(z), config.edge_threshold);
  return t;
}

Matrix apply_transform(const FeatureTransform& transform, const Matrix& raw) {
  if (raw.cols() != transform.raw_dimension) {
    throw SchemaError("transform expects " + std::to_string(transform.raw_dimension) + " raw features, got " +
                      std::to_string(raw.cols()));
  }
  const Matrix normalized = transform.normalizer ? transform.normalizer->apply(raw) : Matrix{};
  const Matrix& input = transform.normalizer ? normalized : raw;
  const Matrix z = neighborhood_features(input, transform.neighborhoods);
  const std::size_t q = z.cols();
  const std::size_t width = transform.output_dimension();
  Matrix out(raw.rows(), width);
  for (std::size_t i = 0; i < raw.rows(); ++i) {
    const auto zr = z.row(i);
    auto o = out.row(i);
    std::copy(zr.begin(), zr.end(), o.begin());
    for (std::size_t e = 0; e < transform.edges.size(); ++e) {
      const auto [a, b] = transform.edges.pairs[e];
      o[q + e] = zr[a] - zr[b];
    }
  }
  return out;
}

}  // namespace nefb
