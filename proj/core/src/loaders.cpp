#include "nefb/loaders.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <unordered_map>

#include "file_util.hpp"
#include "nefb/errors.hpp"

namespace nefb {
namespace {

constexpr std::uint32_t kIdxImageMagic = 0x00000803;
constexpr std::uint32_t kIdxLabelMagic = 0x00000801;
constexpr std::size_t kCifarSide = 32;
constexpr std::size_t kCifarPixels = kCifarSide * kCifarSide * 3;
constexpr std::size_t kCifarRecord = 1 + kCifarPixels;

std::uint32_t big_endian_u32(const std::vector<std::uint8_t>& bytes, std::size_t offset,
                             const std::filesystem::path& path) {
  if (offset + 4 > bytes.size()) {
    throw TruncatedFileError(path.string() + ": truncated header at byte " + std::to_string(offset));
  }
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_line(std::string_view line, char delimiter) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delimiter, start);
    cells.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

}  // namespace

Dataset load_mnist_idx(const std::filesystem::path& images, const std::filesystem::path& labels) {
  const auto image_bytes = detail::read_bytes(images);
  const auto label_bytes = detail::read_bytes(labels);

  if (const auto magic = big_endian_u32(image_bytes, 0, images); magic != kIdxImageMagic) {
    throw BadMagicError(images.string() + ": bad IDX image magic " + std::to_string(magic));
  }
  if (const auto magic = big_endian_u32(label_bytes, 0, labels); magic != kIdxLabelMagic) {
    throw BadMagicError(labels.string() + ": bad IDX label magic " + std::to_string(magic));
  }
  const std::size_t count = big_endian_u32(image_bytes, 4, images);
  const std::size_t rows = big_endian_u32(image_bytes, 8, images);
  const std::size_t cols = big_endian_u32(image_bytes, 12, images);
  const std::size_t label_count = big_endian_u32(label_bytes, 4, labels);
  if (count != label_count) {
    throw CountMismatchError(images.string() + " holds " + std::to_string(count) + " images but " +
                             labels.string() + " holds " + std::to_string(label_count) + " labels");
  }
  const std::size_t pixels = rows * cols;
  if (image_bytes.size() < 16 + count * pixels) {
    throw TruncatedFileError(images.string() + ": expected " + std::to_string(16 + count * pixels) +
                             " bytes, found " + std::to_string(image_bytes.size()));
  }
  if (label_bytes.size() < 8 + count) {
    throw TruncatedFileError(labels.string() + ": expected " + std::to_string(8 + count) + " bytes, found " +
                             std::to_string(label_bytes.size()));
  }

  Matrix x(count, pixels);
  std::vector<int> y(count);
  int max_label = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint8_t* src = image_bytes.data() + 16 + i * pixels;
    auto row = x.row(i);
    for (std::size_t p = 0; p < pixels; ++p) row[p] = src[p] / 255.0;
    y[i] = label_bytes[8 + i] + 1;
    max_label = std::max(max_label, y[i]);
  }
  // Digit sets always use ten classes even when a file lacks some digits.
  const int classes = std::max(10, max_label);
  std::vector<std::string> names;
  for (int c = 0; c < classes; ++c) names.push_back(std::to_string(c));
  return Dataset(std::move(x), std::move(y), classes, ImageGeometry{rows, cols, 1}, std::move(names));
}

Dataset load_cifar10(std::span<const std::filesystem::path> batches) {
  if (batches.empty()) throw ArgumentError("no CIFAR-10 batch files given");
  std::vector<double> values;
  std::vector<int> labels;
  for (const auto& path : batches) {
    const auto bytes = detail::read_bytes(path);
    if (bytes.empty() || bytes.size() % kCifarRecord != 0) {
      throw TruncatedFileError(path.string() + ": length " + std::to_string(bytes.size()) +
                               " is not a positive multiple of " + std::to_string(kCifarRecord));
    }
    const std::size_t records = bytes.size() / kCifarRecord;
    values.reserve(values.size() + records * kCifarPixels);
    for (std::size_t r = 0; r < records; ++r) {
      const std::uint8_t* rec = bytes.data() + r * kCifarRecord;
      if (rec[0] > 9) {
        throw FormatError(path.string() + ": label byte " + std::to_string(rec[0]) + " at offset " +
                          std::to_string(r * kCifarRecord));
      }
      labels.push_back(rec[0] + 1);
      for (std::size_t p = 0; p < kCifarPixels; ++p) values.push_back(rec[1 + p] / 255.0);
    }
  }
  const std::size_t n = labels.size();
  return Dataset(Matrix(n, kCifarPixels, std::move(values)), std::move(labels), 10,
                 ImageGeometry{kCifarSide, kCifarSide, 3},
                 {"airplane", "automobile", "bird", "cat", "deer", "dog", "frog", "horse", "ship", "truck"});
}

Dataset load_delimited(const std::filesystem::path& path, const DelimitedOptions& options,
                       const std::vector<std::string>* class_names) {
  const std::string text = detail::read_text(path);

  std::vector<std::string> names = class_names ? *class_names : std::vector<std::string>{};
  std::unordered_map<std::string, int> ids;
  for (std::size_t k = 0; k < names.size(); ++k) ids.emplace(names[k], static_cast<int>(k + 1));

  std::vector<double> values;
  std::vector<int> labels;
  std::size_t columns = 0;
  std::size_t label_column = options.label_column;
  std::size_t line_no = 0;
  bool header_pending = options.skip_header;
  std::string_view rest(text);
  while (!rest.empty()) {
    const auto eol = rest.find('\n');
    std::string_view line = rest.substr(0, eol);
    rest = eol == std::string_view::npos ? std::string_view{} : rest.substr(eol + 1);
    ++line_no;
    if (trim(line).empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    const auto cells = split_line(line, options.delimiter);
    if (columns == 0) {
      columns = cells.size();
      if (columns < 2) throw FormatError(path.string() + ": need at least one feature and one label column");
      if (label_column == 0) label_column = columns;
      if (label_column > columns) {
        throw ArgumentError("label column " + std::to_string(label_column) + " exceeds " +
                            std::to_string(columns) + " columns");
      }
    } else if (cells.size() != columns) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected " + std::to_string(columns) +
                        " cells, found " + std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c + 1 == label_column) {
        const std::string token(cells[c]);
        auto it = ids.find(token);
        if (it == ids.end()) {
          if (class_names) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) + ": unseen class token '" + token + "'");
          }
          names.push_back(token);
          it = ids.emplace(token, static_cast<int>(names.size())).first;
        }
        labels.push_back(it->second);
        continue;
      }
      double v = 0.0;
      const auto cell = cells[c];
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) {
        throw FormatError(path.string() + ":" + std::to_string(line_no) + ": non-numeric cell '" +
                          std::string(cell) + "' in column " + std::to_string(c + 1));
      }
      values.push_back(v);
    }
  }
  if (labels.empty()) throw FormatError(path.string() + ": no data rows");
  const std::size_t n = labels.size();
  const int classes = static_cast<int>(names.size());
  return Dataset(Matrix(n, columns - 1, std::move(values)), std::move(labels), classes, std::nullopt,
                 std::move(names));
}

}  // namespace nefb
