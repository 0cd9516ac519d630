#include "nefb/normalizer.hpp"

#include <cmath>

#include "nefb/errors.hpp"

namespace nefb {

Normalizer fit_normalizer(const Matrix& x) {
  if (x.rows() < 2) throw ArgumentError("normalizer needs at least two rows");
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  Normalizer norm{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) norm.mean[j] += x(i, j);
  }
  for (auto& m : norm.mean) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double c = x(i, j) - norm.mean[j];
      norm.sigma[j] += c * c;
    }
  }
  for (auto& s : norm.sigma) s = std::sqrt(s / static_cast<double>(n - 1));
  return norm;
}

void Normalizer::apply_in_place(Matrix& x) const {
  if (x.cols() != mean.size()) {
    throw SchemaError("normalizer fitted on " + std::to_string(mean.size()) + " features, got " +
                      std::to_string(x.cols()));
  }
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto row = x.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      row[j] -= mean[j];
      if (sigma[j] > 0.0) row[j] /= sigma[j];
    }
  }
}

Matrix Normalizer::apply(const Matrix& x) const {
  Matrix out = x;
  apply_in_place(out);
  return out;
}

}  // namespace nefb
