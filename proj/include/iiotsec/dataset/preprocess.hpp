#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"
#include "iiotsec/dataset/records.hpp"

namespace iiotsec::dataset {

/// A record after feature selection; features.size() equals the number of
/// kept columns.
struct ReducedRecord {
  std::vector<double> features;
  ClassLabel8 label8 = ClassLabel8::Normal;

  friend bool operator==(const ReducedRecord&, const ReducedRecord&) = default;
};

struct FeatureDropResult {
  std::vector<ReducedRecord> records;
  std::vector<std::size_t> kept_indices;  // ascending, relative to the input columns
};

/// Removes every column that takes exactly one distinct value across all
/// records. Throws ConfigError on empty input.
FeatureDropResult drop_constant_features(std::span<const RawRecord> records);
FeatureDropResult drop_constant_features(std::span<const ReducedRecord> records);

/// Selects `kept_indices` from a raw 27-feature reading.
std::vector<double> select_features(std::span<const double> raw, std::span<const std::size_t> kept_indices);

/// Per-feature min/max fitted on the training split.
struct NormalizationParams {
  std::vector<double> mins;
  std::vector<double> maxs;

  std::size_t size() const noexcept { return mins.size(); }
  friend bool operator==(const NormalizationParams&, const NormalizationParams&) = default;
};

NormalizationParams fit_minmax(std::span<const std::vector<double>> rows);

/// Min-max scaler over fitted NormalizationParams. Values outside the fitted
/// range are clamped to [0, 1]; zero-range features map to 0.
class MinMaxScaler {
 public:
  MinMaxScaler() = default;
  explicit MinMaxScaler(NormalizationParams params);

  void fit(std::span<const std::vector<double>> rows);
  bool fitted() const noexcept { return fitted_; }
  const NormalizationParams& params() const;

  std::vector<double> transform(std::span<const double> values) const;
  /// Inverse of transform for in-range values; zero-range features return min.
  std::vector<double> inverse_transform(std::span<const double> scaled) const;

 private:
  NormalizationParams params_;
  bool fitted_ = false;
};

/// {"kept_indices": [...], "mins": [...], "maxs": [...]}
nlohmann::json normalization_to_json(std::span<const std::size_t> kept_indices, const NormalizationParams& params);
void normalization_from_json(const nlohmann::json& doc, std::vector<std::size_t>& kept_indices,
                             NormalizationParams& params);

struct SplitRatios {
  double train = 0.70;
  double validation = 0.15;
  double test = 0.15;
};

/// Row indices of each partition, ascending.
struct DatasetSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
  std::uint64_t seed = 0;
};

/// Stratified (by 4-class group) random split. Overall partition sizes are
/// the rounded ratio targets and each class's training share is within one
/// sample of its ratio target.
DatasetSplit split(std::span<const ClassLabel8> labels, const SplitRatios& ratios, std::uint64_t seed);
DatasetSplit split(std::span<const RawRecord> records, const SplitRatios& ratios, std::uint64_t seed);

}  // namespace iiotsec::dataset
