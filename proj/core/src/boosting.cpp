#include "nefb/boosting.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "nefb/errors.hpp"
#include "nefb/stump.hpp"

namespace nefb {

Matrix init_weights(const LabelCode& y, WeightInit init) {
  const std::size_t n = y.rows();
  const std::size_t k = y.classes();
  if (n == 0 || k == 0) throw ArgumentError("weights need n >= 1 and K >= 1");
  Matrix w(n, k);
  if (init == WeightInit::Uniform) {
    const double u = 1.0 / (static_cast<double>(n) * static_cast<double>(k));
    for (auto& v : w.data()) v = u;
    return w;
  }
  if (k < 2) throw ArgumentError("asymmetric weight init needs K >= 2");
  const double correct = 1.0 / (2.0 * static_cast<double>(n));
  const double wrong = 1.0 / (2.0 * static_cast<double>(n) * static_cast<double>(k - 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < k; ++l) w(i, l) = y(i, l) > 0 ? correct : wrong;
  }
  return w;
}

double alpha_of(double gamma) {
  const double g = std::clamp(gamma, -kMaxEdge, kMaxEdge);
  return 0.5 * std::log((1.0 + g) / (1.0 - g));
}

double update_weights(Matrix& w, double alpha, std::span<const std::int8_t> h, const LabelCode& y) {
  if (w.rows() != y.rows() || w.cols() != y.classes() || h.size() != w.data().size()) {
    throw SchemaError("update_weights: shapes of W, h and Y disagree");
  }
  const double agree = std::exp(-alpha);
  const double disagree = std::exp(alpha);
  auto wd = w.data();
  const auto yd = y.data();
  double z = 0.0;
  for (std::size_t c = 0; c < wd.size(); ++c) {
    wd[c] *= h[c] * yd[c] > 0 ? agree : disagree;
    z += wd[c];
  }
  for (auto& v : wd) v /= z;
  return z;
}

std::size_t argmax(std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t l = 1; l < scores.size(); ++l) {
    if (scores[l] > scores[best]) best = l;
  }
  return best;
}

std::string to_string(FeatureMode mode) {
  switch (mode) {
    case FeatureMode::Raw:
      return "raw";
    case FeatureMode::Constructed:
      return "constructed";
    case FeatureMode::Haar:
      return "haar";
  }
  return "raw";
}

FeatureMode feature_mode_from_string(const std::string& name) {
  if (name == "raw") return FeatureMode::Raw;
  if (name == "constructed") return FeatureMode::Constructed;
  if (name == "haar") return FeatureMode::Haar;
  throw ArgumentError("unknown feature mode '" + name + "'");
}

std::size_t TrainConfig::effective_cadence() const {
  if (curve_cadence > 0) return curve_cadence;
  return iterations <= 10000 ? 1 : 10;
}

namespace {

void add_tree_scores(const HammingTree& tree, double alpha, const FeatureView& view, std::span<double> scores,
                     std::size_t classes) {
  std::vector<std::int8_t> out(classes);
  for (std::size_t i = 0; i < view.instance_count(); ++i) {
    tree.predict(view, i, out);
    double* s = scores.data() + i * classes;
    for (std::size_t l = 0; l < classes; ++l) s[l] += alpha * out[l];
  }
}

std::size_t count_errors(std::span<const double> scores, std::span<const int> labels, std::size_t classes) {
  std::size_t errors = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::size_t predicted = argmax(scores.subspan(i * classes, classes));
    if (static_cast<int>(predicted) + 1 != labels[i]) ++errors;
  }
  return errors;
}

void check_view(const Ensemble& ensemble, const FeatureView& view, std::span<const int> labels) {
  if (ensemble.classes < 1) throw SchemaError("ensemble has no classes");
  if (labels.size() != view.instance_count()) throw SchemaError("label count differs from instance count");
}

}  // namespace

Prediction predict(const Ensemble& ensemble, const FeatureView& view, std::size_t instance) {
  const auto k = static_cast<std::size_t>(ensemble.classes);
  Prediction p;
  p.scores.assign(k, 0.0);
  std::vector<std::int8_t> out(k);
  for (const Stage& stage : ensemble.stages) {
    if (stage.tree.classes() != k) throw SchemaError("stage class count differs from the ensemble's");
    stage.tree.predict(view, instance, out);
    for (std::size_t l = 0; l < k; ++l) p.scores[l] += stage.alpha * out[l];
  }
  p.label = static_cast<int>(argmax(p.scores)) + 1;
  return p;
}

double evaluate(const Ensemble& ensemble, const FeatureView& view, std::span<const int> labels) {
  check_view(ensemble, view, labels);
  if (labels.empty()) return 0.0;
  const auto k = static_cast<std::size_t>(ensemble.classes);
  std::vector<double> scores(labels.size() * k, 0.0);
  for (const Stage& stage : ensemble.stages) add_tree_scores(stage.tree, stage.alpha, view, scores, k);
  return static_cast<double>(count_errors(scores, labels, k)) / static_cast<double>(labels.size());
}

std::vector<std::size_t> replay_error_counts(const Ensemble& ensemble, const FeatureView& view,
                                             std::span<const int> labels) {
  check_view(ensemble, view, labels);
  const auto k = static_cast<std::size_t>(ensemble.classes);
  std::vector<double> scores(labels.size() * k, 0.0);
  std::vector<std::size_t> counts;
  counts.reserve(ensemble.stages.size());
  for (const Stage& stage : ensemble.stages) {
    add_tree_scores(stage.tree, stage.alpha, view, scores, k);
    counts.push_back(count_errors(scores, labels, k));
  }
  return counts;
}

std::optional<double> LearningCurve::tail_mean_test_error() const {
  if (points.empty()) return std::nullopt;
  const std::size_t last = points.back().iteration;
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& p : points) {
    if (p.test_error && 2 * p.iteration > last) {
      sum += *p.test_error;
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

std::optional<double> LearningCurve::final_test_error() const {
  for (auto it = points.rbegin(); it != points.rend(); ++it) {
    if (it->test_error) return it->test_error;
  }
  return std::nullopt;
}

TrainResult train(const TrainingFeatureSpace& space, std::span<const int> labels, int classes,
                  const TrainConfig& config, const FeatureSchema& schema, const EvalSet* eval,
                  const IterationObserver& observer) {
  if (config.iterations < 1) throw ArgumentError("boosting needs at least one iteration");
  if (config.leaves < 1) throw ArgumentError("trees need at least one leaf");
  if (config.candidates_per_split > space.feature_count()) {
    throw ArgumentError("candidates per split exceeds the feature count");
  }
  const std::size_t n = space.instance_count();
  if (labels.size() != n) throw SchemaError("label count differs from instance count");
  if (eval && (!eval->view || eval->labels.size() != eval->view->instance_count())) {
    throw SchemaError("evaluation set labels differ from its instance count");
  }
  const auto k = static_cast<std::size_t>(classes);

  const LabelCode y = LabelCode::one_hot(labels, classes);
  Matrix w = init_weights(y, config.init);
  const Matrix w0 = w;

  TrainResult result;
  result.ensemble.classes = classes;
  result.ensemble.schema = schema;
  result.ensemble.config = config;

  std::vector<double> train_scores(n * k, 0.0);
  std::vector<double> test_scores(eval ? eval->labels.size() * k : 0, 0.0);
  const std::size_t cadence = config.effective_cadence();
  const TreeConfig tree_config{config.leaves, config.candidates_per_split};
  Rng rng(config.seed);
  const auto start = std::chrono::steady_clock::now();
  double z_product = 1.0;

  for (std::size_t t = 1; t <= config.iterations; ++t) {
    const auto codes = weighted_codes(w, y);
    const TreeFit fit = learn_tree(space, codes, k, tree_config, rng);
    const auto h = fit.outputs();
    const double gamma = edge_of(h, w, y);
    if (!(gamma > 0.0)) {
      result.stop = StopReason::NoPositiveEdge;
      break;
    }
    const double alpha = alpha_of(gamma);
    const double z = update_weights(w, alpha, h, y);
    z_product *= z;
    result.edges.push_back(gamma);
    result.normalizers.push_back(z);

    double hamming = 0.0;
    for (std::size_t c = 0; c < train_scores.size(); ++c) {
      train_scores[c] += alpha * h[c];
      if (train_scores[c] * y.data()[c] <= 0.0) hamming += w0.data()[c];
    }
    CurvePoint point;
    point.iteration = t;
    point.train_error = static_cast<double>(count_errors(train_scores, labels, k)) / static_cast<double>(n);
    if (eval) {
      add_tree_scores(fit.tree, alpha, *eval->view, test_scores, k);
      if (t % cadence == 0 || t == config.iterations) {
        point.test_error = eval->labels.empty() ? 0.0
                                                : static_cast<double>(count_errors(test_scores, eval->labels, k)) /
                                                      static_cast<double>(eval->labels.size());
      }
    }
    if (config.record_time) {
      point.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    result.ensemble.stages.push_back({alpha, fit.tree});
    result.curve.points.push_back(point);

    if (observer) {
      observer(IterationState{t, w, fit, gamma, alpha, z, z_product, hamming, point.train_error});
    }
  }

  // An early stop leaves the last point without a test error when it fell between cadence ticks.
  if (eval && !result.curve.points.empty() && !result.curve.points.back().test_error) {
    result.curve.points.back().test_error =
        eval->labels.empty() ? 0.0
                             : static_cast<double>(count_errors(test_scores, eval->labels, k)) /
                                   static_cast<double>(eval->labels.size());
  }
  return result;
}

}  // namespace nefb
