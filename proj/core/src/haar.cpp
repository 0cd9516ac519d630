#include "nefb/haar.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "nefb/errors.hpp"

namespace nefb {
namespace {

constexpr std::uint64_t kField12 = 0xFFF;

struct Bands {
  std::size_t columns;
  std::size_t rows;
};

Bands bands(HaarType type) { return {band_columns(type), band_rows(type)}; }

/// Placements along one axis: sum over band units u of (extent - u * bands + 1).
std::uint64_t axis_placements(std::size_t extent, std::size_t band_count) {
  std::uint64_t total = 0;
  for (std::size_t size = band_count; size <= extent; size += band_count) total += extent - size + 1;
  return total;
}

}  // namespace

IntegralImage::IntegralImage(std::span<const double> pixels, std::size_t height, std::size_t width)
    : height_(height), width_(width), table_((height + 1) * (width + 1), 0.0) {
  if (pixels.size() != height * width) throw SchemaError("integral image: pixel count does not match geometry");
  const std::size_t stride = width + 1;
  for (std::size_t r = 0; r < height; ++r) {
    double row_sum = 0.0;
    for (std::size_t c = 0; c < width; ++c) {
      row_sum += pixels[r * width + c];
      table_[(r + 1) * stride + (c + 1)] = table_[r * stride + (c + 1)] + row_sum;
    }
  }
}

std::size_t band_columns(HaarType type) {
  switch (type) {
    case HaarType::TwoVertical:
    case HaarType::Checkerboard:
      return 2;
    case HaarType::ThreeVertical:
      return 3;
    default:
      return 1;
  }
}

std::size_t band_rows(HaarType type) {
  switch (type) {
    case HaarType::TwoHorizontal:
    case HaarType::Checkerboard:
      return 2;
    case HaarType::ThreeHorizontal:
      return 3;
    default:
      return 1;
  }
}

std::string to_string(HaarType type) {
  switch (type) {
    case HaarType::TwoVertical:
      return "two_vertical";
    case HaarType::TwoHorizontal:
      return "two_horizontal";
    case HaarType::ThreeVertical:
      return "three_vertical";
    case HaarType::ThreeHorizontal:
      return "three_horizontal";
    case HaarType::Checkerboard:
      return "checkerboard";
  }
  return "two_vertical";
}

HaarType haar_type_from_string(const std::string& name) {
  for (int t = 0; t < kHaarTypeCount; ++t) {
    if (to_string(static_cast<HaarType>(t)) == name) return static_cast<HaarType>(t);
  }
  throw SchemaError("unknown Haar filter type '" + name + "'");
}

bool HaarFilter::admissible(const ImageGeometry& g) const {
  const Bands b = bands(type);
  return static_cast<int>(type) < kHaarTypeCount && width > 0 && height > 0 && width % b.columns == 0 &&
         height % b.rows == 0 && std::size_t{x} + width <= g.width && std::size_t{y} + height <= g.height &&
         channel < g.channels;
}

FeatureId HaarFilter::encode() const {
  return static_cast<FeatureId>(type) | (FeatureId{channel} & 0x1FFF) << 3 | (FeatureId{x} & kField12) << 16 |
         (FeatureId{y} & kField12) << 28 | (FeatureId{width} & kField12) << 40 | (FeatureId{height} & kField12) << 52;
}

HaarFilter HaarFilter::decode(FeatureId id) {
  HaarFilter f;
  f.type = static_cast<HaarType>(id & 0x7);
  f.channel = static_cast<std::uint16_t>((id >> 3) & 0x1FFF);
  f.x = static_cast<std::uint16_t>((id >> 16) & kField12);
  f.y = static_cast<std::uint16_t>((id >> 28) & kField12);
  f.width = static_cast<std::uint16_t>((id >> 40) & kField12);
  f.height = static_cast<std::uint16_t>((id >> 52) & kField12);
  return f;
}

double eval_haar(std::span<const IntegralImage> channels, const HaarFilter& f) {
  const IntegralImage& ii = channels[f.channel];
  const std::size_t x = f.x;
  const std::size_t y = f.y;
  const std::size_t w = f.width;
  const std::size_t h = f.height;
  switch (f.type) {
    case HaarType::TwoVertical: {
      const std::size_t half = w / 2;
      return ii.rect_sum(x, y, half, h) - ii.rect_sum(x + half, y, half, h);
    }
    case HaarType::TwoHorizontal: {
      const std::size_t half = h / 2;
      return ii.rect_sum(x, y, w, half) - ii.rect_sum(x, y + half, w, half);
    }
    case HaarType::ThreeVertical: {
      const std::size_t third = w / 3;
      return ii.rect_sum(x, y, third, h) + ii.rect_sum(x + 2 * third, y, third, h) -
             2.0 * ii.rect_sum(x + third, y, third, h);
    }
    case HaarType::ThreeHorizontal: {
      const std::size_t third = h / 3;
      return ii.rect_sum(x, y, w, third) + ii.rect_sum(x, y + 2 * third, w, third) -
             2.0 * ii.rect_sum(x, y + third, w, third);
    }
    case HaarType::Checkerboard: {
      const std::size_t hw = w / 2;
      const std::size_t hh = h / 2;
      return ii.rect_sum(x, y, hw, hh) + ii.rect_sum(x + hw, y + hh, hw, hh) - ii.rect_sum(x + hw, y, hw, hh) -
             ii.rect_sum(x, y + hh, hw, hh);
    }
  }
  return 0.0;
}

HaarFilter sample_haar_filter(Rng& rng, const ImageGeometry& g) {
  if (g.width < 2 || g.height < 2 || g.channels == 0) {
    throw ArgumentError("image too small for Haar filters (need at least 2x2)");
  }
  // Every type fits once the image is at least 2x2 except the three-band ones;
  // redraw the type until it fits.
  std::uniform_int_distribution<int> pick_type(0, kHaarTypeCount - 1);
  HaarType type;
  do {
    type = static_cast<HaarType>(pick_type(rng));
  } while (band_columns(type) > g.width || band_rows(type) > g.height);
  const Bands b = bands(type);
  std::uniform_int_distribution<std::size_t> unit_w(1, g.width / b.columns);
  std::uniform_int_distribution<std::size_t> unit_h(1, g.height / b.rows);
  HaarFilter f;
  f.type = type;
  f.width = static_cast<std::uint16_t>(unit_w(rng) * b.columns);
  f.height = static_cast<std::uint16_t>(unit_h(rng) * b.rows);
  f.x = static_cast<std::uint16_t>(std::uniform_int_distribution<std::size_t>(0, g.width - f.width)(rng));
  f.y = static_cast<std::uint16_t>(std::uniform_int_distribution<std::size_t>(0, g.height - f.height)(rng));
  f.channel = static_cast<std::uint16_t>(std::uniform_int_distribution<std::size_t>(0, g.channels - 1)(rng));
  return f;
}

std::uint64_t count_haar_filters(const ImageGeometry& g) {
  std::uint64_t total = 0;
  for (int t = 0; t < kHaarTypeCount; ++t) {
    const Bands b = bands(static_cast<HaarType>(t));
    total += axis_placements(g.width, b.columns) * axis_placements(g.height, b.rows);
  }
  return total * g.channels;
}

std::vector<IntegralImage> integral_images(std::span<const double> pixels, const ImageGeometry& g) {
  if (pixels.size() != g.size()) throw SchemaError("pixel count does not match image geometry");
  const std::size_t plane = g.height * g.width;
  std::vector<IntegralImage> out;
  out.reserve(g.channels);
  for (std::size_t c = 0; c < g.channels; ++c) out.emplace_back(pixels.subspan(c * plane, plane), g.height, g.width);
  return out;
}

HaarFeatures::HaarFeatures(const Matrix& images, const ImageGeometry& geometry)
    : geometry_(geometry), filter_count_(count_haar_filters(geometry)) {
  if (images.cols() != geometry.size()) throw SchemaError("Haar features: matrix width does not match geometry");
  if (geometry.width > kField12 || geometry.height > kField12 || geometry.channels > 0x1FFF) {
    throw ArgumentError("image geometry too large for Haar filter ids");
  }
  images_.reserve(images.rows());
  for (std::size_t i = 0; i < images.rows(); ++i) images_.push_back(integral_images(images.row(i), geometry));
}

double HaarFeatures::value(FeatureId feature, std::size_t instance) const {
  return eval_haar(images_[instance], HaarFilter::decode(feature));
}

void HaarFeatures::draw_candidates(std::size_t count, Rng& rng, std::vector<FeatureId>& out) const {
  out.clear();
  if (count == 0 || count >= filter_count_) {
    for (int t = 0; t < kHaarTypeCount; ++t) {
      const auto type = static_cast<HaarType>(t);
      const Bands b = bands(type);
      for (std::size_t c = 0; c < geometry_.channels; ++c) {
        for (std::size_t h = b.rows; h <= geometry_.height; h += b.rows) {
          for (std::size_t w = b.columns; w <= geometry_.width; w += b.columns) {
            for (std::size_t y = 0; y + h <= geometry_.height; ++y) {
              for (std::size_t x = 0; x + w <= geometry_.width; ++x) {
                out.push_back(HaarFilter{type, static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y),
                                         static_cast<std::uint16_t>(w), static_cast<std::uint16_t>(h),
                                         static_cast<std::uint16_t>(c)}
                                  .encode());
              }
            }
          }
        }
      }
    }
    return;
  }
  std::set<FeatureId> seen;
  while (out.size() < count) {
    const FeatureId id = sample_haar_filter(rng, geometry_).encode();
    if (seen.insert(id).second) out.push_back(id);
  }
}

SortedColumn HaarFeatures::sorted_node_values(FeatureId feature, const NodeMembers& node,
                                              std::vector<std::uint32_t>& order, std::vector<double>& values) const {
  const HaarFilter f = HaarFilter::decode(feature);
  std::vector<std::pair<double, std::uint32_t>> pairs;
  pairs.reserve(node.members.size());
  for (std::uint32_t i : node.members) pairs.emplace_back(eval_haar(images_[i], f), i);
  std::sort(pairs.begin(), pairs.end());
  order.resize(pairs.size());
  values.resize(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    values[k] = pairs[k].first;
    order[k] = pairs[k].second;
  }
  return {order, values};
}

}  // namespace nefb
