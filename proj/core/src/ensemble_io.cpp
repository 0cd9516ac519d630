#include "nefb/ensemble_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "file_util.hpp"
#include "nefb/errors.hpp"
#include "nefb/haar.hpp"

namespace nefb {
namespace {

using json = nlohmann::ordered_json;

constexpr const char* kEnsembleFormat = "nefb-ensemble";

std::string shortest(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t parse_hex64(const std::string& s) {
  std::uint64_t v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v, 16);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw SchemaError("bad hex digest '" + s + "'");
  return v;
}

json feature_to_json(FeatureId feature, FeatureMode mode) {
  if (mode != FeatureMode::Haar) return feature;
  const HaarFilter f = HaarFilter::decode(feature);
  return {{"type", to_string(f.type)}, {"x", f.x},          {"y", f.y},
          {"width", f.width},          {"height", f.height}, {"channel", f.channel}};
}

FeatureId feature_from_json(const json& j, FeatureMode mode) {
  if (mode != FeatureMode::Haar) return j.get<FeatureId>();
  HaarFilter f;
  f.type = haar_type_from_string(j.at("type").get<std::string>());
  f.x = j.at("x").get<std::uint16_t>();
  f.y = j.at("y").get<std::uint16_t>();
  f.width = j.at("width").get<std::uint16_t>();
  f.height = j.at("height").get<std::uint16_t>();
  f.channel = j.at("channel").get<std::uint16_t>();
  return f.encode();
}

std::string votes_to_string(const std::vector<std::int8_t>& votes) {
  std::string s(votes.size(), '+');
  for (std::size_t l = 0; l < votes.size(); ++l) s[l] = votes[l] > 0 ? '+' : '-';
  return s;
}

std::vector<std::int8_t> votes_from_string(const std::string& s) {
  std::vector<std::int8_t> votes(s.size());
  for (std::size_t l = 0; l < s.size(); ++l) {
    if (s[l] != '+' && s[l] != '-') throw SchemaError("vote string may only hold '+' and '-'");
    votes[l] = s[l] == '+' ? 1 : -1;
  }
  return votes;
}

const char* init_name(WeightInit init) { return init == WeightInit::Uniform ? "uniform" : "asymmetric"; }

WeightInit init_from(const std::string& name) {
  if (name == "uniform") return WeightInit::Uniform;
  if (name == "asymmetric") return WeightInit::Asymmetric;
  throw SchemaError("unknown weight init '" + name + "'");
}

}  // namespace

std::string ensemble_to_json(const Ensemble& e) {
  json doc;
  doc["format"] = kEnsembleFormat;
  doc["version"] = kEnsembleFormatVersion;
  doc["classes"] = e.classes;
  doc["class_names"] = e.class_names;
  json schema = {{"mode", to_string(e.schema.mode)},
                 {"input_dimension", e.schema.input_dimension},
                 {"feature_count", e.schema.feature_count},
                 {"transform_digest", hex64(e.schema.transform_digest)}};
  if (e.schema.geometry) {
    schema["geometry"] = {{"height", e.schema.geometry->height},
                          {"width", e.schema.geometry->width},
                          {"channels", e.schema.geometry->channels}};
  } else {
    schema["geometry"] = nullptr;
  }
  doc["schema"] = schema;
  doc["config"] = {{"iterations", e.config.iterations},
                   {"leaves", e.config.leaves},
                   {"candidates_per_split", e.config.candidates_per_split},
                   {"seed", e.config.seed},
                   {"curve_cadence", e.config.curve_cadence},
                   {"init", init_name(e.config.init)}};
  json stages = json::array();
  for (const Stage& stage : e.stages) {
    json nodes = json::array();
    for (const auto& node : stage.tree.nodes()) {
      json jn;
      jn["feature"] = feature_to_json(node.stump.feature, e.schema.mode);
      jn["threshold"] = node.stump.constant() ? json(nullptr) : json(node.stump.threshold);
      jn["votes"] = votes_to_string(node.stump.votes);
      if (!node.leaf()) {
        jn["left"] = node.left;
        jn["right"] = node.right;
      }
      nodes.push_back(std::move(jn));
    }
    stages.push_back({{"alpha", stage.alpha}, {"nodes", std::move(nodes)}});
  }
  doc["stages"] = std::move(stages);
  return doc.dump(1) + "\n";
}

Ensemble ensemble_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& ex) {
    throw FormatError(std::string("model is not valid JSON: ") + ex.what());
  }
  if (!doc.is_object() || doc.value("format", "") != kEnsembleFormat) throw SchemaError("document is not an ensemble");
  if (doc.value("version", 0) != kEnsembleFormatVersion) {
    throw SchemaError("unsupported ensemble version " + doc["version"].dump());
  }
  try {
    Ensemble e;
    e.classes = doc.at("classes").get<int>();
    e.class_names = doc.at("class_names").get<std::vector<std::string>>();
    const auto& s = doc.at("schema");
    e.schema.mode = feature_mode_from_string(s.at("mode").get<std::string>());
    e.schema.input_dimension = s.at("input_dimension").get<std::size_t>();
    e.schema.feature_count = s.at("feature_count").get<std::uint64_t>();
    e.schema.transform_digest = parse_hex64(s.at("transform_digest").get<std::string>());
    if (!s.at("geometry").is_null()) {
      const auto& g = s["geometry"];
      e.schema.geometry = ImageGeometry{g.at("height").get<std::size_t>(), g.at("width").get<std::size_t>(),
                                        g.at("channels").get<std::size_t>()};
    }
    const auto& c = doc.at("config");
    e.config.iterations = c.at("iterations").get<std::size_t>();
    e.config.leaves = c.at("leaves").get<std::size_t>();
    e.config.candidates_per_split = c.at("candidates_per_split").get<std::size_t>();
    e.config.seed = c.at("seed").get<std::uint64_t>();
    e.config.curve_cadence = c.at("curve_cadence").get<std::size_t>();
    e.config.init = init_from(c.at("init").get<std::string>());
    for (const auto& js : doc.at("stages")) {
      std::vector<HammingTree::Node> nodes;
      for (const auto& jn : js.at("nodes")) {
        HammingTree::Node node;
        node.stump.feature = feature_from_json(jn.at("feature"), e.schema.mode);
        node.stump.threshold = jn.at("threshold").is_null() ? kAlwaysPositive : jn["threshold"].get<double>();
        node.stump.votes = votes_from_string(jn.at("votes").get<std::string>());
        if (jn.contains("left")) {
          node.left = jn["left"].get<std::int32_t>();
          node.right = jn.at("right").get<std::int32_t>();
        }
        if (node.stump.votes.size() != static_cast<std::size_t>(e.classes)) {
          throw SchemaError("vote vector length differs from the class count");
        }
        if (e.schema.mode != FeatureMode::Haar && !node.stump.constant() &&
            node.stump.feature >= e.schema.feature_count) {
          throw SchemaError("stump feature outside the model's feature schema");
        }
        nodes.push_back(std::move(node));
      }
      e.stages.push_back({js.at("alpha").get<double>(), HammingTree(std::move(nodes))});
    }
    return e;
  } catch (const json::exception& ex) {
    throw SchemaError(std::string("malformed ensemble: ") + ex.what());
  }
}

void save_ensemble(const Ensemble& ensemble, const std::filesystem::path& path) {
  detail::write_text(path, ensemble_to_json(ensemble));
}

Ensemble load_ensemble(const std::filesystem::path& path) { return ensemble_from_json(detail::read_text(path)); }

void write_curve_csv(const LearningCurve& curve, const std::filesystem::path& path) {
  std::string out = "iteration,train_error,test_error,wall_seconds\n";
  for (const auto& p : curve.points) {
    out += std::to_string(p.iteration);
    out += ',' + shortest(p.train_error) + ',';
    if (p.test_error) out += shortest(*p.test_error);
    out += ',';
    if (p.seconds) out += shortest(*p.seconds);
    out += '\n';
  }
  detail::write_text(path, out);
}

LearningCurve read_curve_csv(const std::filesystem::path& path) {
  std::istringstream in(detail::read_text(path));
  std::string line;
  if (!std::getline(in, line) || line.rfind("iteration,", 0) != 0) {
    throw FormatError(path.string() + ": missing learning-curve header");
  }
  auto parse = [&](const std::string& cell) -> std::optional<double> {
    if (cell.empty()) return std::nullopt;
    double v = 0.0;
    const auto r = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (r.ec != std::errc()) throw FormatError(path.string() + ": bad number '" + cell + "'");
    return v;
  };
  LearningCurve curve;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 4) throw FormatError(path.string() + ": expected 4 columns in '" + line + "'");
    CurvePoint p;
    p.iteration = static_cast<std::size_t>(parse(cells[0]).value_or(0));
    p.train_error = parse(cells[1]).value_or(0.0);
    p.test_error = parse(cells[2]);
    p.seconds = parse(cells[3]);
    curve.points.push_back(p);
  }
  return curve;
}

}  // namespace nefb
