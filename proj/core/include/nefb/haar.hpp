#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nefb/dataset.hpp"
#include "nefb/feature_space.hpp"

namespace nefb {

/// Cumulative sum table with a zero border: (h+1) x (w+1).
class IntegralImage {
 public:
  IntegralImage() = default;
  /// `pixels` is row-major height x width.
  IntegralImage(std::span<const double> pixels, std::size_t height, std::size_t width);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }

  /// Sum over columns [x, x+w) and rows [y, y+h) with four lookups.
  double rect_sum(std::size_t x, std::size_t y, std::size_t w, std::size_t h) const {
    const std::size_t stride = width_ + 1;
    return table_[(y + h) * stride + (x + w)] - table_[y * stride + (x + w)] -
           table_[(y + h) * stride + x] + table_[y * stride + x];
  }

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<double> table_;
};

/// Filter types by band layout. "Vertical" types are split by vertical lines
/// (bands side by side) and respond to vertical edges; "horizontal" types are
/// split by horizontal lines (bands stacked).
enum class HaarType : std::uint8_t {
  TwoVertical = 0,     ///< [+|-]
  TwoHorizontal = 1,   ///< [+/-] stacked
  ThreeVertical = 2,   ///< [+|-|+], middle band weighted 2
  ThreeHorizontal = 3, ///< stacked +,-,+
  Checkerboard = 4,    ///< [+|-] over [-|+]
};

inline constexpr int kHaarTypeCount = 5;

std::size_t band_columns(HaarType type);
std::size_t band_rows(HaarType type);
std::string to_string(HaarType type);
HaarType haar_type_from_string(const std::string& name);

struct HaarFilter {
  HaarType type = HaarType::TwoVertical;
  std::uint16_t x = 0;
  std::uint16_t y = 0;
  std::uint16_t width = 0;
  std::uint16_t height = 0;
  std::uint16_t channel = 0;

  bool admissible(const ImageGeometry& geometry) const;

  /// Packs the descriptor into a feature id (bijective on descriptors).
  FeatureId encode() const;
  static HaarFilter decode(FeatureId id);

  friend bool operator==(const HaarFilter&, const HaarFilter&) = default;
};

/// (sum of positive bands) - (sum of negative bands) on the filter's channel.
/// The middle band of a three-band filter counts twice, so every type is zero
/// on a constant image.
double eval_haar(std::span<const IntegralImage> channels, const HaarFilter& filter);

/// Uniform over type, then band sizes admissible for the geometry, then position, then channel.
/// Throws ArgumentError if the image is too small for any filter.
HaarFilter sample_haar_filter(Rng& rng, const ImageGeometry& geometry);

/// Number of admissible filters of all five types over all channels.
std::uint64_t count_haar_filters(const ImageGeometry& geometry);

/// Integral images of one instance, one per channel. Pixels are channel-planar.
std::vector<IntegralImage> integral_images(std::span<const double> pixels, const ImageGeometry& geometry);

/// Lazily sampled Haar feature space over a set of images. Feature ids are
/// encoded filters; candidates are fresh random filters at every draw.
class HaarFeatures final : public TrainingFeatureSpace {
 public:
  HaarFeatures(const Matrix& images, const ImageGeometry& geometry);

  std::size_t instance_count() const override { return images_.size(); }
  double value(FeatureId feature, std::size_t instance) const override;
  std::uint64_t feature_count() const override { return filter_count_; }
  void draw_candidates(std::size_t count, Rng& rng, std::vector<FeatureId>& out) const override;
  SortedColumn sorted_node_values(FeatureId feature, const NodeMembers& node, std::vector<std::uint32_t>& order_buffer,
                                  std::vector<double>& value_buffer) const override;

  const ImageGeometry& geometry() const { return geometry_; }

 private:
  ImageGeometry geometry_;
  std::uint64_t filter_count_ = 0;
  std::vector<std::vector<IntegralImage>> images_;
};

}  // namespace nefb
