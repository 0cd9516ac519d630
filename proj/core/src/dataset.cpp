#include "nefb/dataset.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>

#include "file_util.hpp"
#include "nefb/errors.hpp"

namespace nefb {

Dataset::Dataset(Matrix x, std::vector<int> labels, int class_count, std::optional<ImageGeometry> geometry,
                 std::vector<std::string> class_names)
    : x_(std::move(x)),
      labels_(std::move(labels)),
      class_count_(class_count),
      geometry_(geometry),
      class_names_(std::move(class_names)) {
  if (labels_.size() != x_.rows()) throw SchemaError("label count differs from instance count");
  if (class_count_ < 1) throw ArgumentError("class count must be at least 1");
  for (int label : labels_) {
    if (label < 1 || label > class_count_) {
      throw ArgumentError("label " + std::to_string(label) + " outside 1.." + std::to_string(class_count_));
    }
  }
  if (geometry_ && geometry_->size() != x_.cols()) {
    throw SchemaError("image geometry does not cover the feature count");
  }
  if (!class_names_.empty() && class_names_.size() != static_cast<std::size_t>(class_count_)) {
    throw SchemaError("class name count differs from class count");
  }
  for (double v : x_.data()) {
    if (std::isnan(v)) throw FormatError("dataset contains a missing (NaN) value");
  }
}

std::string Dataset::class_name(int label) const {
  if (!class_names_.empty() && label >= 1 && label <= class_count_) return class_names_[label - 1];
  return std::to_string(label);
}

std::vector<std::size_t> Dataset::class_histogram() const {
  std::vector<std::size_t> counts(class_count_, 0);
  for (int label : labels_) ++counts[label - 1];
  return counts;
}

std::vector<int> Dataset::missing_classes() const {
  std::vector<int> missing;
  const auto counts = class_histogram();
  for (int k = 0; k < class_count_; ++k) {
    if (counts[k] == 0) missing.push_back(k + 1);
  }
  return missing;
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  std::vector<int> labels(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) labels[k] = labels_.at(rows[k]);
  return Dataset(x_.select_rows(rows), std::move(labels), class_count_, geometry_, class_names_);
}

Dataset Dataset::with_features(Matrix x) const {
  std::optional<ImageGeometry> geometry;
  if (geometry_ && geometry_->size() == x.cols()) geometry = geometry_;
  return Dataset(std::move(x), labels_, class_count_, geometry, class_names_);
}

LabelCode::LabelCode(std::size_t rows, std::size_t classes, std::vector<std::int8_t> codes)
    : rows_(rows), classes_(classes), codes_(std::move(codes)) {
  if (codes_.size() != rows * classes) throw SchemaError("label code size does not match its shape");
}

LabelCode LabelCode::one_hot(std::span<const int> labels, int class_count) {
  std::vector<std::int8_t> codes(labels.size() * class_count, -1);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 1 || labels[i] > class_count) throw ArgumentError("label outside 1..K");
    codes[i * class_count + (labels[i] - 1)] = 1;
  }
  return LabelCode(labels.size(), class_count, std::move(codes));
}

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t count, std::uint64_t seed) {
  if (count > n) {
    throw ArgumentError("cannot draw " + std::to_string(count) + " of " + std::to_string(n) + " instances");
  }
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates: the first `count` slots hold the draw.
  for (std::size_t k = 0; k < count; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, n - 1);
    std::swap(pool[k], pool[pick(rng)]);
  }
  pool.resize(count);
  return pool;
}

TrainValidSplit split_train_valid(const Dataset& data, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw ArgumentError("split fraction must lie in (0, 1)");
  auto order = sample_indices(data.size(), data.size(), seed);
  const auto n_train = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(data.size())));
  TrainValidSplit split;
  split.train_rows.assign(order.begin(), order.begin() + n_train);
  split.valid_rows.assign(order.begin() + n_train, order.end());
  split.train = data.subset(split.train_rows);
  split.valid = data.subset(split.valid_rows);
  split.classes_missing_from_train = split.train.missing_classes();
  return split;
}

Matrix subsample_instances(const Matrix& x, std::size_t m, std::uint64_t seed) {
  return x.select_rows(sample_indices(x.rows(), m, seed));
}

namespace {

constexpr char kDatasetMagic[8] = {'N', 'E', 'F', 'B', 'D', 'S', '0', '1'};

template <class T>
void put(std::string& out, T value) {
  static_assert(std::endian::native == std::endian::little, "interchange format is little-endian");
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.append(bytes, sizeof(T));
}

class Reader {
 public:
  Reader(const std::vector<std::uint8_t>& bytes, std::string name) : bytes_(bytes), name_(std::move(name)) {}

  template <class T>
  T get() {
    if (offset_ + sizeof(T) > bytes_.size()) {
      throw TruncatedFileError(name_ + ": truncated at byte " + std::to_string(offset_));
    }
    T value;
    std::memcpy(&value, bytes_.data() + offset_, sizeof(T));
    offset_ += sizeof(T);
    return value;
  }

  std::string get_string(std::size_t length) {
    if (offset_ + length > bytes_.size()) {
      throw TruncatedFileError(name_ + ": truncated at byte " + std::to_string(offset_));
    }
    std::string s(reinterpret_cast<const char*>(bytes_.data() + offset_), length);
    offset_ += length;
    return s;
  }

 private:
  const std::vector<std::uint8_t>& bytes_;
  std::string name_;
  std::size_t offset_ = 0;
};

}  // namespace

void save_dataset(const Dataset& data, const std::filesystem::path& path) {
  std::string out(kDatasetMagic, sizeof(kDatasetMagic));
  put<std::uint64_t>(out, data.size());
  put<std::uint64_t>(out, data.dimension());
  put<std::int32_t>(out, data.class_count());
  const auto& g = data.geometry();
  put<std::uint8_t>(out, g ? 1 : 0);
  put<std::uint64_t>(out, g ? g->height : 0);
  put<std::uint64_t>(out, g ? g->width : 0);
  put<std::uint64_t>(out, g ? g->channels : 0);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(data.class_names().size()));
  for (const auto& name : data.class_names()) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
    out += name;
  }
  for (double v : data.x().data()) put<double>(out, v);
  for (int label : data.labels()) put<std::int32_t>(out, label);
  detail::write_text(path, out);
}

Dataset load_dataset(const std::filesystem::path& path) {
  const auto bytes = detail::read_bytes(path);
  Reader in(bytes, path.string());
  if (in.get_string(sizeof(kDatasetMagic)) != std::string(kDatasetMagic, sizeof(kDatasetMagic))) {
    throw BadMagicError(path.string() + ": not a dataset interchange file");
  }
  const auto n = in.get<std::uint64_t>();
  const auto d = in.get<std::uint64_t>();
  const auto k = in.get<std::int32_t>();
  const bool has_geometry = in.get<std::uint8_t>() != 0;
  ImageGeometry g{in.get<std::uint64_t>(), in.get<std::uint64_t>(), in.get<std::uint64_t>()};
  std::vector<std::string> names(in.get<std::uint32_t>());
  for (auto& name : names) name = in.get_string(in.get<std::uint32_t>());
  std::vector<double> values(n * d);
  for (auto& v : values) v = in.get<double>();
  std::vector<int> labels(n);
  for (auto& label : labels) label = in.get<std::int32_t>();
  return Dataset(Matrix(n, d, std::move(values)), std::move(labels), k,
                 has_geometry ? std::optional<ImageGeometry>(g) : std::nullopt, std::move(names));
}

}  // namespace nefb
