#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "iiotsec/cli/config.hpp"
#include "iiotsec/dataset/records.hpp"
#include "iiotsec/nn/metrics.hpp"
#include "iiotsec/nn/serialization.hpp"
#include "iiotsec/nn/trainer.hpp"
#include "iiotsec/report/report.hpp"
#include "iiotsec/sdn/scenario.hpp"

namespace iiotsec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitDetection = 3;

/// Raw partitions plus the preprocessing fitted on them.
struct PreparedData {
  std::vector<dataset::RawRecord> train;
  std::vector<dataset::RawRecord> validation;
  std::vector<dataset::RawRecord> test;
  std::vector<std::size_t> kept_indices;          // from the full data set
  dataset::NormalizationParams normalization;     // fitted on train only
};

/// Loads or synthesizes the records, drops constant features, splits, and
/// fits min-max on the training partition. Files are not written.
PreparedData prepare_data(const RunConfig& config);

std::vector<nn::LabeledSample> to_samples(std::span<const dataset::RawRecord> records,
                                         std::span<const std::size_t> kept_indices,
                                         const dataset::NormalizationParams& norm, Mode mode);
std::vector<std::string> class_names(Mode mode);

/// train.csv, validation.csv, test.csv, normalization.json in out_dir.
PreparedData cmd_prepare(const RunConfig& config);

struct TrainOutput {
  nn::ModelArtifact artifact;
  std::vector<nn::EpochTrace> trace;
  std::filesystem::path model_file;
  std::filesystem::path epochs_file;
};

/// model_<mode>.json and epochs_<mode>.csv in out_dir.
TrainOutput cmd_train(const RunConfig& config);

/// Evaluates config.model_path (default out_dir/model_<mode>.json) on the
/// test partition; writes metrics_<mode>.csv, confusion_<mode>.csv and
/// metrics_<mode>.json. Throws DataError if the model was trained on a
/// different feature selection than the data yields.
nn::MetricsReport cmd_eval(const RunConfig& config);

/// CNN, DT and RSL-KNN (one row per K) in both modes; comparison.csv/json.
report::ComparisonTable cmd_compare(const RunConfig& config);

struct SimulateOutput {
  scenario::Outcome outcome;
  report::ScenarioSummary summary;
  std::filesystem::path dir;
};

/// Runs the configured scenario against an IDS model (config.model_path,
/// else out_dir/model_<mode>.json, else one trained on the spot). Writes
/// trace.jsonl, ledger.jsonl, the audit files, alerts.jsonl and
/// scenario_report.json under out_dir/simulate/<scenario>/.
SimulateOutput cmd_simulate(const RunConfig& config);

/// Bundled scenario name or a path to a script.
std::filesystem::path resolve_scenario(const std::string& name_or_path);

/// Runs one command by name and maps failures to exit codes.
int run_command(const std::string& command, const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace iiotsec::cli
