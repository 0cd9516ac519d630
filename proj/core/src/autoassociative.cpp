#include "nefb/autoassociative.hpp"

#include <algorithm>
#include <cmath>

#include "nefb/boosting.hpp"
#include "nefb/errors.hpp"
#include "nefb/feature_space.hpp"
#include "nefb/stump.hpp"

namespace nefb {

LabelCode median_split_targets(const Matrix& x) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  if (n == 0) throw ArgumentError("no instances to binarize");
  std::vector<std::int8_t> codes(n * d);
  std::vector<double> column;
  for (std::size_t j = 0; j < d; ++j) {
    column = x.column(j);
    std::sort(column.begin(), column.end());
    const double median = n % 2 == 1 ? column[n / 2] : 0.5 * (column[n / 2 - 1] + column[n / 2]);
    for (std::size_t i = 0; i < n; ++i) codes[i * d + j] = x(i, j) > median ? 1 : -1;
  }
  return LabelCode(n, d, std::move(codes));
}

AutoassociativeResult autoassociative_select(const Matrix& x_sub, std::size_t iterations) {
  if (iterations < 1) throw ArgumentError("autoassociative selection needs at least one iteration");
  const std::size_t n = x_sub.rows();
  const std::size_t d = x_sub.cols();
  if (n < 2 || d == 0) throw ArgumentError("autoassociative selection needs at least two instances");

  bool any_varying = false;
  for (std::size_t j = 0; j < d && !any_varying; ++j) {
    for (std::size_t i = 1; i < n; ++i) {
      if (x_sub(i, j) != x_sub(0, j)) {
        any_varying = true;
        break;
      }
    }
  }
  if (!any_varying) throw NumericError("autoassociative selection: every feature is constant");

  const LabelCode y = median_split_targets(x_sub);
  Matrix w = init_weights(y, WeightInit::Uniform);
  const DenseFeatures space(x_sub);
  StumpSearch search(space, d);
  std::vector<std::uint32_t> members(n);
  for (std::uint32_t i = 0; i < n; ++i) members[i] = i;
  const NodeMembers root{members, {}, 0, true};
  std::vector<FeatureId> all(d);
  for (std::size_t j = 0; j < d; ++j) all[j] = j;

  AutoassociativeResult result;
  std::vector<bool> taken(d, false);
  std::vector<std::int8_t> h(n * d);
  for (std::size_t t = 0; t < iterations; ++t) {
    const auto codes = weighted_codes(w, y);
    const StumpFit fit = search.best(root, codes, all);
    if (!(fit.edge > 0.0)) break;
    for (std::size_t i = 0; i < n; ++i) {
      const int phi = fit.stump.phi(x_sub(i, fit.stump.feature));
      for (std::size_t l = 0; l < d; ++l) h[i * d + l] = static_cast<std::int8_t>(fit.stump.votes[l] * phi);
    }
    update_weights(w, alpha_of(fit.edge), h, y);
    result.edges.push_back(fit.edge);
    result.picks.push_back(fit.stump.feature);
    if (fit.stump.constant()) {
      ++result.constant_stumps;
      continue;
    }
    if (!taken[fit.stump.feature]) {
      taken[fit.stump.feature] = true;
      result.selected.push_back(fit.stump.feature);
    }
  }
  return result;
}

}  // namespace nefb
