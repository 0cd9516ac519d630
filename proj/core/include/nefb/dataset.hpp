#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nefb/matrix.hpp"

namespace nefb {

struct ImageGeometry {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 1;

  std::size_t size() const { return height * width * channels; }
  friend bool operator==(const ImageGeometry&, const ImageGeometry&) = default;
};

/// Labelled instances. Rows of `x` are instances, labels are 1-based class ids.
///
/// Immutable after construction; the constructor checks that every label is in
/// 1..K and that the geometry (when present) covers exactly d features.
class Dataset {
 public:
  Dataset() = default;
  Dataset(Matrix x, std::vector<int> labels, int class_count,
          std::optional<ImageGeometry> geometry = std::nullopt,
          std::vector<std::string> class_names = {});

  const Matrix& x() const { return x_; }
  std::span<const int> labels() const { return labels_; }
  std::size_t size() const { return x_.rows(); }
  std::size_t dimension() const { return x_.cols(); }
  int class_count() const { return class_count_; }
  const std::optional<ImageGeometry>& geometry() const { return geometry_; }

  /// Token of each class id (index 0 is class 1); empty for numeric-coded sources.
  const std::vector<std::string>& class_names() const { return class_names_; }
  std::string class_name(int label) const;

  /// Instances per class; entry 0 counts class 1.
  std::vector<std::size_t> class_histogram() const;
  /// Classes in 1..K without any instance.
  std::vector<int> missing_classes() const;

  Dataset subset(std::span<const std::size_t> rows) const;
  /// Same labels and metadata, different feature matrix (same row count).
  Dataset with_features(Matrix x) const;

 private:
  Matrix x_;
  std::vector<int> labels_;
  int class_count_ = 0;
  std::optional<ImageGeometry> geometry_;
  std::vector<std::string> class_names_;
};

/// ±1 one-hot code: entry (i, l) is +1 iff l + 1 is the label of instance i.
/// Also used for multi-label targets (autoassociative mode), where a row may
/// hold any number of +1 entries.
class LabelCode {
 public:
  LabelCode() = default;
  LabelCode(std::size_t rows, std::size_t classes, std::vector<std::int8_t> codes);
  static LabelCode one_hot(std::span<const int> labels, int class_count);

  std::size_t rows() const { return rows_; }
  std::size_t classes() const { return classes_; }
  std::int8_t operator()(std::size_t i, std::size_t l) const { return codes_[i * classes_ + l]; }
  std::span<const std::int8_t> row(std::size_t i) const { return {codes_.data() + i * classes_, classes_}; }
  std::span<const std::int8_t> data() const { return codes_; }

 private:
  std::size_t rows_ = 0;
  std::size_t classes_ = 0;
  std::vector<std::int8_t> codes_;
};

struct TrainValidSplit {
  Dataset train;
  Dataset valid;
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> valid_rows;
  /// Classes absent from the training part; callers report these as warnings.
  std::vector<int> classes_missing_from_train;
};

/// Seeded shuffle, then the first round(fraction * n) rows form the training part.
TrainValidSplit split_train_valid(const Dataset& data, double fraction, std::uint64_t seed);

/// `count` distinct indices from [0, n), drawn without replacement in draw order.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t count, std::uint64_t seed);

/// Rows drawn without replacement. Throws ArgumentError when m > n.
Matrix subsample_instances(const Matrix& x, std::size_t m, std::uint64_t seed);

/// Binary interchange format; reloading reproduces features and labels bit-exactly.
void save_dataset(const Dataset& data, const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path);

}  // namespace nefb
