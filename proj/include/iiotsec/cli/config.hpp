#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "iiotsec/baselines/decision_tree.hpp"
#include "iiotsec/baselines/rsl_knn.hpp"
#include "iiotsec/dataset/preprocess.hpp"
#include "iiotsec/dataset/synthetic.hpp"
#include "iiotsec/nn/model.hpp"

namespace iiotsec::cli {

enum class Mode { Binary, Multiclass };
std::string_view mode_name(Mode m);
/// Throws ConfigError for anything but "binary" / "multiclass".
Mode mode_from_name(std::string_view name);

struct RunConfig {
  // Exactly one data source.
  std::optional<std::filesystem::path> dataset_path;
  std::optional<dataset::SyntheticConfig> synthetic;
  dataset::SplitRatios split;

  nn::ModelConfig model;  // input_length and output_units are set per run
  baselines::DecisionTreeParams decision_tree;
  std::vector<std::size_t> knn_k{5, 10};
  std::size_t knn_subspaces = 10;
  std::size_t knn_subspace_dim = 9;

  std::optional<std::filesystem::path> model_path;  // IDS / eval model
  std::string scenario = "normal";
  std::filesystem::path out_dir = "out";
  std::optional<std::uint64_t> seed;
  Mode mode = Mode::Binary;
  std::size_t threads = 0;

  /// Throws ConfigError unless exactly one data source and a seed are set.
  void validate() const;
  std::uint64_t required_seed() const;
};

/// Keys: seed, mode, out, scenario, model_path, threads,
/// data {"path": ...} or data {"synthetic": {...}}, split {train, validation,
/// test}, model {...}, decision_tree {max_depth, min_samples_split},
/// rsl_knn {k: [...], n_subspaces, subspace_dim}. Relative paths resolve
/// against `base_dir`.
RunConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Flag-equivalent overrides, as strings; unset entries are left alone.
struct Overrides {
  std::optional<std::string> seed;
  std::optional<std::string> mode;
  std::optional<std::string> out;
  std::optional<std::string> scenario;
};

/// IIOTSEC_SEED, IIOTSEC_MODE, IIOTSEC_OUT, IIOTSEC_SCENARIO; IIOTSEC_CONFIG
/// is read by the caller.
Overrides overrides_from_env();
void apply_overrides(RunConfig& config, const Overrides& o);

/// Synthetic default data source used when no config file is given.
RunConfig default_config();

}  // namespace iiotsec::cli
