#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "nefb/dataset.hpp"

namespace nefb {

/// MNIST IDX pair (big-endian, magic 0x00000803 images / 0x00000801 labels).
/// Pixels are scaled to [0,1] by /255; digit labels 0..9 become classes 1..10.
Dataset load_mnist_idx(const std::filesystem::path& images, const std::filesystem::path& labels);

/// CIFAR-10 binary batches: records of 1 label byte + 3072 channel-planar pixel bytes.
Dataset load_cifar10(std::span<const std::filesystem::path> batches);

struct DelimitedOptions {
  /// 1-based column holding the class token; 0 picks the last column.
  std::size_t label_column = 0;
  char delimiter = ',';
  bool skip_header = false;
};

/// Delimited numeric table with one label column. Class tokens map to 1..K in
/// first-appearance order; pass `class_names` from the training load to decode
/// a test file against the same map (unseen tokens are then an error).
Dataset load_delimited(const std::filesystem::path& path, const DelimitedOptions& options,
                       const std::vector<std::string>* class_names = nullptr);

}  // namespace nefb
