#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "nefb/features.hpp"

namespace nefb {

inline constexpr int kTransformFormatVersion = 1;

std::string transform_to_json(const FeatureTransform& transform);
FeatureTransform transform_from_json(const std::string& text);

void save_transform(const FeatureTransform& transform, const std::filesystem::path& path);
FeatureTransform load_transform(const std::filesystem::path& path);

/// FNV-1a of the serialized transform; models record it to detect schema drift.
std::uint64_t transform_digest(const FeatureTransform& transform);

/// Raw-feature membership of one output column of the transform.
/// Neighborhood columns have only `positive`; edge columns have both.
struct ColumnMask {
  bool edge = false;
  std::vector<std::size_t> positive;
  std::vector<std::size_t> negative;
};

ColumnMask column_mask(const FeatureTransform& transform, std::size_t column);

/// One line per output column: kind,index,positive members;negative members.
void write_masks_csv(const FeatureTransform& transform, const std::filesystem::path& path);

/// Binary PGM (P5) of a mask laid out on the image grid; channels are placed
/// side by side. Positive members get level 255, negative 128, both 192.
void write_mask_pgm(const ColumnMask& mask, const ImageGeometry& geometry,
                    const std::filesystem::path& path);

}  // namespace nefb
