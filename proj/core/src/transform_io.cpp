#include "nefb/transform_io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

#include "file_util.hpp"
#include "nefb/errors.hpp"

namespace nefb {
namespace {

using json = nlohmann::ordered_json;

constexpr const char* kTransformFormat = "nefb-feature-transform";

const char* rule_name(MembershipRule rule) { return rule == MembershipRule::Absolute ? "absolute" : "signed"; }

MembershipRule rule_from(const std::string& name) {
  if (name == "absolute") return MembershipRule::Absolute;
  if (name == "signed") return MembershipRule::Signed;
  throw SchemaError("unknown membership rule '" + name + "'");
}

}  // namespace

std::string transform_to_json(const FeatureTransform& t) {
  json doc;
  doc["format"] = kTransformFormat;
  doc["version"] = kTransformFormatVersion;
  doc["raw_dimension"] = t.raw_dimension;
  if (t.geometry) {
    doc["geometry"] = {{"height", t.geometry->height}, {"width", t.geometry->width}, {"channels", t.geometry->channels}};
  } else {
    doc["geometry"] = nullptr;
  }
  doc["config"] = {{"subsample_size", t.config.subsample_size},
                   {"seed", t.config.seed},
                   {"neighborhood_thresholds", t.config.neighborhood_thresholds},
                   {"edge_threshold", t.config.edge_threshold},
                   {"membership_rule", rule_name(t.config.rule)},
                   {"normalize", t.config.normalize},
                   {"selected", t.config.selected}};
  if (t.normalizer) {
    doc["normalizer"] = {{"mean", t.normalizer->mean}, {"sigma", t.normalizer->sigma}};
  } else {
    doc["normalizer"] = nullptr;
  }
  json origins = json::array();
  for (const auto& o : t.neighborhoods.origin) origins.push_back({o.feature, o.threshold});
  doc["neighborhoods"] = {{"rule", rule_name(t.neighborhoods.rule)},
                          {"thresholds", t.neighborhoods.thresholds},
                          {"selected", t.neighborhoods.selected},
                          {"members", t.neighborhoods.members},
                          {"origin", origins}};
  json pairs = json::array();
  for (const auto& [a, b] : t.edges.pairs) pairs.push_back({a, b});
  doc["edges"] = {{"threshold", t.edges.threshold}, {"pairs", pairs}};
  return doc.dump(1) + "\n";
}

FeatureTransform transform_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("feature transform is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != kTransformFormat) {
    throw SchemaError("document is not a feature transform");
  }
  if (doc.value("version", 0) != kTransformFormatVersion) {
    throw SchemaError("unsupported feature transform version " + doc["version"].dump());
  }
  try {
    FeatureTransform t;
    t.raw_dimension = doc.at("raw_dimension").get<std::size_t>();
    if (!doc.at("geometry").is_null()) {
      const auto& g = doc["geometry"];
      t.geometry = ImageGeometry{g.at("height").get<std::size_t>(), g.at("width").get<std::size_t>(),
                                 g.at("channels").get<std::size_t>()};
    }
    const auto& c = doc.at("config");
    t.config.subsample_size = c.at("subsample_size").get<std::size_t>();
    t.config.seed = c.at("seed").get<std::uint64_t>();
    t.config.neighborhood_thresholds = c.at("neighborhood_thresholds").get<std::vector<double>>();
    t.config.edge_threshold = c.at("edge_threshold").get<double>();
    t.config.rule = rule_from(c.at("membership_rule").get<std::string>());
    t.config.normalize = c.at("normalize").get<bool>();
    t.config.selected = c.at("selected").get<std::vector<std::size_t>>();
    if (!doc.at("normalizer").is_null()) {
      t.normalizer = Normalizer{doc["normalizer"].at("mean").get<std::vector<double>>(),
                                doc["normalizer"].at("sigma").get<std::vector<double>>()};
    }
    const auto& n = doc.at("neighborhoods");
    t.neighborhoods.rule = rule_from(n.at("rule").get<std::string>());
    t.neighborhoods.thresholds = n.at("thresholds").get<std::vector<double>>();
    t.neighborhoods.selected = n.at("selected").get<std::vector<std::size_t>>();
    t.neighborhoods.members = n.at("members").get<std::vector<std::vector<std::size_t>>>();
    for (const auto& o : n.at("origin")) t.neighborhoods.origin.push_back({o.at(0).get<std::size_t>(), o.at(1).get<double>()});
    const auto& e = doc.at("edges");
    t.edges.threshold = e.at("threshold").get<double>();
    for (const auto& p : e.at("pairs")) t.edges.pairs.emplace_back(p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>());

    for (const auto& members : t.neighborhoods.members) {
      if (members.empty()) throw SchemaError("empty neighborhood in transform");
      for (std::size_t j : members) {
        if (j >= t.raw_dimension) throw SchemaError("neighborhood member out of range");
      }
    }
    for (const auto& [a, b] : t.edges.pairs) {
      if (a >= b || b >= t.neighborhoods.size()) throw SchemaError("malformed edge pair in transform");
    }
    if (t.normalizer && t.normalizer->dimension() != t.raw_dimension) {
      throw SchemaError("normalizer width differs from raw dimension");
    }
    return t;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed feature transform: ") + e.what());
  }
}

void save_transform(const FeatureTransform& transform, const std::filesystem::path& path) {
  detail::write_text(path, transform_to_json(transform));
}

FeatureTransform load_transform(const std::filesystem::path& path) {
  return transform_from_json(detail::read_text(path));
}

std::uint64_t transform_digest(const FeatureTransform& transform) {
  return detail::fnv1a(transform_to_json(transform));
}

ColumnMask column_mask(const FeatureTransform& transform, std::size_t column) {
  const auto& nb = transform.neighborhoods;
  if (column >= transform.output_dimension()) throw ArgumentError("transform column out of range");
  if (column < nb.size()) return ColumnMask{false, nb.members[column], {}};
  const auto [a, b] = transform.edges.pairs[column - nb.size()];
  return ColumnMask{true, nb.members[a], nb.members[b]};
}

void write_masks_csv(const FeatureTransform& transform, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "kind,column,positive,negative\n";
  for (std::size_t col = 0; col < transform.output_dimension(); ++col) {
    const auto mask = column_mask(transform, col);
    out << (mask.edge ? "edge" : "neighborhood") << ',' << col << ',';
    for (std::size_t k = 0; k < mask.positive.size(); ++k) out << (k ? " " : "") << mask.positive[k];
    out << ',';
    for (std::size_t k = 0; k < mask.negative.size(); ++k) out << (k ? " " : "") << mask.negative[k];
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

void write_mask_pgm(const ColumnMask& mask, const ImageGeometry& geometry, const std::filesystem::path& path) {
  const std::size_t plane = geometry.height * geometry.width;
  const std::size_t out_width = geometry.width * geometry.channels;
  std::vector<std::uint8_t> positive(plane * geometry.channels, 0);
  std::vector<std::uint8_t> negative(plane * geometry.channels, 0);
  for (std::size_t j : mask.positive) {
    if (j >= positive.size()) throw ArgumentError("mask member outside the image");
    positive[j] = 1;
  }
  for (std::size_t j : mask.negative) {
    if (j >= negative.size()) throw ArgumentError("mask member outside the image");
    negative[j] = 1;
  }
  std::string pixels(geometry.height * out_width, '\0');
  for (std::size_t c = 0; c < geometry.channels; ++c) {
    for (std::size_t r = 0; r < geometry.height; ++r) {
      for (std::size_t col = 0; col < geometry.width; ++col) {
        const std::size_t j = c * plane + r * geometry.width + col;
        std::uint8_t level = 0;
        if (positive[j] && negative[j]) {
          level = 192;
        } else if (positive[j]) {
          level = 255;
        } else if (negative[j]) {
          level = 128;
        }
        pixels[r * out_width + c * geometry.width + col] = static_cast<char>(level);
      }
    }
  }
  detail::write_text(path, "P5\n" + std::to_string(out_width) + " " + std::to_string(geometry.height) + "\n255\n" + pixels);
}

}  // namespace nefb
