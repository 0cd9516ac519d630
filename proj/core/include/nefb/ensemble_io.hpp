#pragma once

#include <filesystem>
#include <string>

#include "nefb/boosting.hpp"

namespace nefb {

inline constexpr int kEnsembleFormatVersion = 1;

std::string ensemble_to_json(const Ensemble& ensemble);
/// Throws SchemaError on a foreign document or unsupported version.
Ensemble ensemble_from_json(const std::string& text);

void save_ensemble(const Ensemble& ensemble, const std::filesystem::path& path);
Ensemble load_ensemble(const std::filesystem::path& path);

/// Columns: iteration,train_error,test_error,wall_seconds (empty cells when absent).
void write_curve_csv(const LearningCurve& curve, const std::filesystem::path& path);
LearningCurve read_curve_csv(const std::filesystem::path& path);

}  // namespace nefb
