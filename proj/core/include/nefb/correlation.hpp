#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "nefb/matrix.hpp"

namespace nefb {

/// Sample Pearson correlation. Returns 0 when either vector is constant.
double pearson(std::span<const double> a, std::span<const double> b);

/// Symmetric matrix of pairwise Pearson correlations between columns.
///
/// Columns with zero variance are marked invalid: their off-diagonal entries
/// are 0 and their diagonal is 1.
class CorrelationMatrix {
 public:
  CorrelationMatrix() = default;
  CorrelationMatrix(std::size_t size, std::vector<double> values, std::vector<bool> valid);

  std::size_t size() const { return size_; }
  double operator()(std::size_t j, std::size_t k) const { return values_[j * size_ + k]; }
  std::span<const double> row(std::size_t j) const { return {values_.data() + j * size_, size_}; }
  bool valid(std::size_t j) const { return valid_[j]; }

 private:
  std::size_t size_ = 0;
  std::vector<double> values_;
  std::vector<bool> valid_;
};

/// All column pairs of `x` (m >= 2 rows). Each pair is computed once and
/// mirrored, so symmetry is exact.
CorrelationMatrix correlation_matrix(const Matrix& x);

void write_correlation_csv(const CorrelationMatrix& c, const std::filesystem::path& path);

}  // namespace nefb
