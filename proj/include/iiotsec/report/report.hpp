#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "iiotsec/nn/metrics.hpp"
#include "iiotsec/nn/trainer.hpp"
#include "iiotsec/sdn/trace.hpp"

namespace iiotsec::report {

inline constexpr int kReportSchemaVersion = 1;

/// Value in [0,1] as a percentage, half-up to two decimals: 0.94745 -> "94.75".
std::string format_percent(double fraction);
/// Shortest text that parses back to exactly `v`.
std::string format_double(double v);
/// Throws DataError if `text` is not a complete number.
double parse_double(std::string_view text);

struct MetricsRow {
  std::string name;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;
  friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

/// One row per class, then "average" (macro means, total support) and
/// "accuracy" (accuracy in all three metric columns).
std::vector<MetricsRow> metrics_rows(const nn::MetricsReport& report, std::span<const std::string> class_names);

/// Columns: class,precision_pct,recall_pct,f1_pct,support,precision,recall,f1.
/// The last three hold exact values so the table parses back losslessly.
std::string metrics_csv(const nn::MetricsReport& report, std::span<const std::string> class_names);
std::vector<MetricsRow> parse_metrics_csv(std::string_view csv);

/// Header "truth\\predicted,<names...>" then one row per true class.
std::string confusion_csv(const nn::ConfusionMatrix& m, std::span<const std::string> class_names);
nn::ConfusionMatrix parse_confusion_csv(std::string_view csv);

nlohmann::json metrics_json(const nn::MetricsReport& report, std::span<const std::string> class_names);

/// Columns: epoch,train_loss,train_acc,val_loss,val_acc.
std::string epoch_csv(std::span<const nn::EpochTrace> trace);

struct ComparisonRow {
  std::string algorithm;
  std::optional<double> binary_accuracy;
  std::optional<double> multiclass_accuracy;
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;
  /// Throws ConfigError for an accuracy outside [0,1].
  void add(ComparisonRow row);
};

/// Columns: algorithm,binary_acc_pct,multiclass_acc_pct,binary_acc,multiclass_acc.
/// A missing accuracy is an empty cell.
std::string comparison_csv(const ComparisonTable& table);
nlohmann::json comparison_json(const ComparisonTable& table);

struct ScenarioSummary {
  std::size_t packets_sent = 0;
  std::size_t packets_forwarded = 0;  // delivered to a host
  std::size_t packets_dropped = 0;
  std::size_t blocks_appended = 0;    // ledger blocks
  std::size_t ledger_failures = 0;
  std::size_t hosts_blocked = 0;
  std::size_t tamper_actions = 0;
  std::size_t audits = 0;
  std::size_t safe_verdicts = 0;
  std::size_t mitm_injection_verdicts = 0;
  std::size_t modification_verdicts = 0;

  std::size_t attack_verdicts() const noexcept { return mitm_injection_verdicts + modification_verdicts; }
};

ScenarioSummary summarize(const sdn::Trace& trace);
nlohmann::json scenario_report_json(const ScenarioSummary& s);

}  // namespace iiotsec::report
