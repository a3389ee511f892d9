#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "json.hpp"
#include "iiotsec/dataset/preprocess.hpp"
#include "iiotsec/nn/model.hpp"

namespace iiotsec::nn {

/// A trained model together with the preprocessing it was trained under.
struct ModelArtifact {
  CnnModel model;
  std::vector<std::size_t> kept_indices;
  dataset::NormalizationParams normalization;

  /// Raw reading -> normalized model input (feature selection, then min-max).
  std::vector<double> preprocess(std::span<const double> raw) const;
};

/// {"version": 1, "kind": "cnn", "config": {...}, "kept_indices": [...],
///  "normalization": {"mins": [...], "maxs": [...]},
///  "layers": {"conv1.weights": {"shape": [...], "values": [...]}, ...}}
nlohmann::json artifact_to_json(const ModelArtifact& artifact);
ModelArtifact artifact_from_json(const nlohmann::json& doc);

void save_artifact(const std::filesystem::path& path, const ModelArtifact& artifact);
ModelArtifact load_artifact(const std::filesystem::path& path);

/// Serializes JSON with a trailing newline; throws DataError on I/O failure.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc);
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace iiotsec::nn
