#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "json.hpp"
#include "iiotsec/dataset/records.hpp"

namespace iiotsec::dataset {

/// Gaussian-cluster stand-in for the gas-pipeline dataset: each class gets a
/// random centre over the varying features, and the listed constant features
/// hold one fixed value for every record.
struct SyntheticConfig {
  std::map<ClassLabel8, std::size_t> counts;
  std::vector<std::size_t> constant_features{2, 5, 8, 11, 14, 17, 20, 23, 26};
  double center_spread = 1.0;  // centres drawn uniformly in [0, spread] (feature units)
  double noise_stddev = 0.12;

  /// Adds `count` samples of a 4-class group; Injection is spread evenly
  /// across its five subclasses.
  void add_group(ClassLabel4 group, std::size_t count);
  std::size_t total() const;
};

/// Desk-scale default: imbalanced like the real dataset, 1,200 records.
SyntheticConfig default_synthetic_config();

/// {"counts": {"Normal": 50, "Injection": 50, "DoS": 10}, "constant_features": [...],
///  "center_spread": 1.0, "noise_stddev": 0.12}. Names may be 8-class labels or
/// 4-class groups.
SyntheticConfig synthetic_config_from_json(const nlohmann::json& doc);
nlohmann::json synthetic_config_to_json(const SyntheticConfig& config);

/// Throws ConfigError for zero-count classes, fewer than nine constant
/// features, or out-of-range feature indices.
std::vector<RawRecord> synthesize_dataset(const SyntheticConfig& config, std::uint64_t seed);

}  // namespace iiotsec::dataset
