#include "iiotsec/report/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "iiotsec/common/error.hpp"

namespace iiotsec::report {

std::string format_percent(double fraction) {
  const double hundredths = std::floor(fraction * 10000.0 + 0.5 + 1e-9);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", hundredths / 100.0);
  return buf;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw DataError("not a number: '" + std::string(text) + "'");
  return v;
}

namespace {

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<std::string> lines_of(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(line);
  return out;
}

std::uint64_t parse_count(const std::string& s) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw DataError("not a count: '" + s + "'");
  return v;
}

void check_names(std::span<const std::string> names, std::size_t n) {
  if (names.size() != n) throw ConfigError("class name count does not match the number of classes");
}

}  // namespace

std::vector<MetricsRow> metrics_rows(const nn::MetricsReport& report, std::span<const std::string> class_names) {
  check_names(class_names, report.per_class.size());
  std::vector<MetricsRow> rows;
  for (std::size_t c = 0; c < report.per_class.size(); ++c) {
    const auto& m = report.per_class[c];
    rows.push_back({class_names[c], m.precision, m.recall, m.f1, m.support});
  }
  const auto total = report.confusion.total();
  rows.push_back({"average", report.macro_precision, report.macro_recall, report.macro_f1, total});
  rows.push_back({"accuracy", report.accuracy, report.accuracy, report.accuracy, total});
  return rows;
}

std::string metrics_csv(const nn::MetricsReport& report, std::span<const std::string> class_names) {
  std::string out = "class,precision_pct,recall_pct,f1_pct,support,precision,recall,f1\n";
  for (const auto& r : metrics_rows(report, class_names)) {
    out += r.name + "," + format_percent(r.precision) + "," + format_percent(r.recall) + "," + format_percent(r.f1) +
           "," + std::to_string(r.support) + "," + format_double(r.precision) + "," + format_double(r.recall) + "," +
           format_double(r.f1) + "\n";
  }
  return out;
}

std::vector<MetricsRow> parse_metrics_csv(std::string_view csv) {
  const auto lines = lines_of(csv);
  if (lines.empty() || lines[0] != "class,precision_pct,recall_pct,f1_pct,support,precision,recall,f1")
    throw DataError("metrics CSV: unexpected header");
  std::vector<MetricsRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split_csv_line(lines[i]);
    if (f.size() != 8) throw DataError("metrics CSV line " + std::to_string(i + 1) + ": expected 8 fields");
    rows.push_back({f[0], parse_double(f[5]), parse_double(f[6]), parse_double(f[7]), parse_count(f[4])});
  }
  return rows;
}

std::string confusion_csv(const nn::ConfusionMatrix& m, std::span<const std::string> class_names) {
  check_names(class_names, m.num_classes());
  std::string out = "truth\\predicted";
  for (const auto& n : class_names) out += "," + n;
  out += "\n";
  for (std::size_t t = 0; t < m.num_classes(); ++t) {
    out += class_names[t];
    for (std::size_t p = 0; p < m.num_classes(); ++p) out += "," + std::to_string(m.at(t, p));
    out += "\n";
  }
  return out;
}

nn::ConfusionMatrix parse_confusion_csv(std::string_view csv) {
  const auto lines = lines_of(csv);
  if (lines.empty()) throw DataError("confusion CSV: empty");
  const auto header = split_csv_line(lines[0]);
  const std::size_t n = header.size() - 1;
  if (n == 0 || lines.size() != n + 1) throw DataError("confusion CSV: row count does not match header");
  std::vector<std::uint64_t> counts;
  for (std::size_t i = 1; i <= n; ++i) {
    const auto f = split_csv_line(lines[i]);
    if (f.size() != n + 1) throw DataError("confusion CSV line " + std::to_string(i + 1) + ": wrong field count");
    for (std::size_t j = 1; j <= n; ++j) counts.push_back(parse_count(f[j]));
  }
  return nn::ConfusionMatrix(n, std::move(counts));
}

nlohmann::json metrics_json(const nn::MetricsReport& report, std::span<const std::string> class_names) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : metrics_rows(report, class_names))
    rows.push_back({{"class", r.name},
                    {"precision", r.precision},
                    {"recall", r.recall},
                    {"f1", r.f1},
                    {"precision_pct", format_percent(r.precision)},
                    {"recall_pct", format_percent(r.recall)},
                    {"f1_pct", format_percent(r.f1)},
                    {"support", r.support}});
  nlohmann::json confusion = nlohmann::json::array();
  for (std::size_t t = 0; t < report.confusion.num_classes(); ++t) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t p = 0; p < report.confusion.num_classes(); ++p) row.push_back(report.confusion.at(t, p));
    confusion.push_back(row);
  }
  return {{"v", kReportSchemaVersion}, {"classes", class_names}, {"rows", rows}, {"confusion", confusion}};
}

std::string epoch_csv(std::span<const nn::EpochTrace> trace) {
  std::string out = "epoch,train_loss,train_acc,val_loss,val_acc\n";
  for (const auto& e : trace)
    out += std::to_string(e.epoch) + "," + format_double(e.train_loss) + "," + format_double(e.train_accuracy) + "," +
           format_double(e.val_loss) + "," + format_double(e.val_accuracy) + "\n";
  return out;
}

void ComparisonTable::add(ComparisonRow row) {
  for (const auto& acc : {row.binary_accuracy, row.multiclass_accuracy})
    if (acc && !(*acc >= 0.0 && *acc <= 1.0)) throw ConfigError("accuracy outside [0,1] for " + row.algorithm);
  rows.push_back(std::move(row));
}

std::string comparison_csv(const ComparisonTable& table) {
  std::string out = "algorithm,binary_acc_pct,multiclass_acc_pct,binary_acc,multiclass_acc\n";
  auto pct = [](const std::optional<double>& v) { return v ? format_percent(*v) : std::string(); };
  auto raw = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  for (const auto& r : table.rows)
    out += r.algorithm + "," + pct(r.binary_accuracy) + "," + pct(r.multiclass_accuracy) + "," +
           raw(r.binary_accuracy) + "," + raw(r.multiclass_accuracy) + "\n";
  return out;
}

nlohmann::json comparison_json(const ComparisonTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  auto val = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  for (const auto& r : table.rows)
    rows.push_back({{"algorithm", r.algorithm},
                    {"binary_accuracy", val(r.binary_accuracy)},
                    {"multiclass_accuracy", val(r.multiclass_accuracy)}});
  return {{"v", kReportSchemaVersion}, {"rows", rows}};
}

ScenarioSummary summarize(const sdn::Trace& trace) {
  using K = sdn::EventKind;
  ScenarioSummary s;
  s.packets_sent = trace.count(K::PacketSent);
  s.packets_forwarded = trace.count(K::Delivery);
  s.packets_dropped = trace.count(K::Drop);
  s.blocks_appended = trace.count(K::LedgerAppend);
  s.ledger_failures = trace.count(K::LedgerFailure);
  s.hosts_blocked = trace.count(K::Block);
  s.tamper_actions = trace.count(K::Tamper);
  s.audits = trace.count(K::Audit);
  for (const auto& e : trace.events()) {
    if (e.kind != K::Alert) continue;
    const auto v = e.details.value("verdict", std::string());
    if (v == "safe") ++s.safe_verdicts;
    else if (v == "mitm_injection") ++s.mitm_injection_verdicts;
    else if (v == "modification") ++s.modification_verdicts;
  }
  return s;
}

nlohmann::json scenario_report_json(const ScenarioSummary& s) {
  return {{"v", kReportSchemaVersion},
          {"packets_sent", s.packets_sent},
          {"packets_forwarded", s.packets_forwarded},
          {"packets_dropped", s.packets_dropped},
          {"blocks_appended", s.blocks_appended},
          {"ledger_failures", s.ledger_failures},
          {"hosts_blocked", s.hosts_blocked},
          {"tamper_actions", s.tamper_actions},
          {"audits", s.audits},
          {"verdicts",
           {{"safe", s.safe_verdicts},
            {"mitm_injection", s.mitm_injection_verdicts},
            {"modification", s.modification_verdicts}}},
          {"attack_verdicts", s.attack_verdicts()}};
}

}  // namespace iiotsec::report
