#pragma once

#include <vector>

#include "nefb/matrix.hpp"

namespace nefb {

/// Per-feature standardization x' = (x - mean) / sigma, with sigma the sample
/// standard deviation. Zero-sigma features are only shifted.
struct Normalizer {
  std::vector<double> mean;
  std::vector<double> sigma;

  std::size_t dimension() const { return mean.size(); }
  Matrix apply(const Matrix& x) const;
  void apply_in_place(Matrix& x) const;
};

Normalizer fit_normalizer(const Matrix& x);

}  // namespace nefb
