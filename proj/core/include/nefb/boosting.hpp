#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nefb/dataset.hpp"
#include "nefb/feature_space.hpp"
#include "nefb/hamming_tree.hpp"
#include "nefb/matrix.hpp"

namespace nefb {

enum class WeightInit {
  /// 1/(2n) on the correct label, 1/(2n(K-1)) on each incorrect one.
  Asymmetric,
  /// 1/(nK) everywhere.
  Uniform,
};

/// Edges are capped at this magnitude before computing coefficients.
inline constexpr double kMaxEdge = 1.0 - 1e-7;

/// Initial weight matrix for one-hot codes. Asymmetric init needs K >= 2.
Matrix init_weights(const LabelCode& y, WeightInit init = WeightInit::Asymmetric);

/// alpha = 1/2 ln((1 + gamma) / (1 - gamma)) with |gamma| capped at kMaxEdge.
double alpha_of(double gamma);

/// w(i,l) <- w(i,l) exp(-alpha h(i,l) y(i,l)) / Z. Returns the normalizer Z.
double update_weights(Matrix& w, double alpha, std::span<const std::int8_t> h, const LabelCode& y);

/// Index (0-based) of the largest score; the smallest index wins ties.
std::size_t argmax(std::span<const double> scores);

enum class FeatureMode { Raw, Constructed, Haar };

std::string to_string(FeatureMode mode);
FeatureMode feature_mode_from_string(const std::string& name);

/// What the ensemble's feature ids refer to.
struct FeatureSchema {
  FeatureMode mode = FeatureMode::Raw;
  /// Raw input width the model expects.
  std::size_t input_dimension = 0;
  /// Width of the representation the trees index (raw d, q+L, or the Haar filter count).
  std::uint64_t feature_count = 0;
  std::optional<ImageGeometry> geometry;
  /// Digest of the feature transform in constructed mode, 0 otherwise.
  std::uint64_t transform_digest = 0;

  friend bool operator==(const FeatureSchema&, const FeatureSchema&) = default;
};

struct TrainConfig {
  std::size_t iterations = 100;
  std::size_t leaves = 1;
  /// Candidate features per split (d'); 0 means all.
  std::size_t candidates_per_split = 0;
  std::uint64_t seed = 1;
  /// Test-error evaluation every `curve_cadence` iterations; 0 picks 1 for
  /// runs up to 10^4 iterations and 10 beyond.
  std::size_t curve_cadence = 0;
  WeightInit init = WeightInit::Asymmetric;
  /// Fill the wall-time column of the learning curve.
  bool record_time = false;

  std::size_t effective_cadence() const;
};

struct Stage {
  double alpha = 0.0;
  HammingTree tree;
  friend bool operator==(const Stage&, const Stage&) = default;
};

/// f(x) = sum_t alpha_t h_t(x); the predicted class is argmax_l f_l(x).
struct Ensemble {
  int classes = 0;
  FeatureSchema schema;
  TrainConfig config;
  std::vector<std::string> class_names;
  std::vector<Stage> stages;
};

struct Prediction {
  int label = 0;  ///< 1-based
  std::vector<double> scores;
};

Prediction predict(const Ensemble& ensemble, const FeatureView& view, std::size_t instance);

/// Zero-one error of the full ensemble.
double evaluate(const Ensemble& ensemble, const FeatureView& view, std::span<const int> labels);

/// Misclassification count after each stage prefix 1..T, computed in one
/// pass by accumulating score vectors.
std::vector<std::size_t> replay_error_counts(const Ensemble& ensemble, const FeatureView& view,
                                             std::span<const int> labels);

struct CurvePoint {
  std::size_t iteration = 0;
  double train_error = 0.0;
  std::optional<double> test_error;
  std::optional<double> seconds;
  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

struct LearningCurve {
  std::vector<CurvePoint> points;

  /// Mean test error over recorded points with iteration > T/2, where T is
  /// the last recorded iteration.
  std::optional<double> tail_mean_test_error() const;
  std::optional<double> final_test_error() const;
};

struct EvalSet {
  const FeatureView* view = nullptr;
  std::span<const int> labels;
};

struct IterationState {
  std::size_t iteration = 0;  ///< 1-based
  const Matrix& weights;      ///< after the update
  const TreeFit& fit;
  double gamma = 0.0;
  double alpha = 0.0;
  double normalizer = 0.0;
  double normalizer_product = 0.0;
  /// sum_il w0(i,l) [f_l(x_i) y(i,l) <= 0] of the current ensemble.
  double weighted_hamming_loss = 0.0;
  double train_error = 0.0;
};

enum class StopReason { Completed, NoPositiveEdge };

struct TrainResult {
  Ensemble ensemble;
  LearningCurve curve;
  StopReason stop = StopReason::Completed;
  std::vector<double> edges;
  std::vector<double> normalizers;
};

using IterationObserver = std::function<void(const IterationState&)>;

/// AdaBoost.MH with Hamming trees. `schema` is copied into the ensemble.
/// Stops early, returning the stages so far, when a tree has gamma <= 0.
TrainResult train(const TrainingFeatureSpace& space, std::span<const int> labels, int classes,
                  const TrainConfig& config, const FeatureSchema& schema,
                  const EvalSet* eval = nullptr, const IterationObserver& observer = {});

}  // namespace nefb
