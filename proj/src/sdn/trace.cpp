#include "iiotsec/sdn/trace.hpp"

#include <algorithm>
#include <array>
#include <fstream>

#include "iiotsec/common/error.hpp"

namespace iiotsec::sdn {
namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 13> kNames = {{
    {EventKind::PacketSent, "packet_sent"},
    {EventKind::PacketIn, "packet_in"},
    {EventKind::IdsVerdict, "ids_verdict"},
    {EventKind::RuleInstall, "rule_install"},
    {EventKind::LedgerAppend, "ledger_append"},
    {EventKind::LedgerFailure, "ledger_failure"},
    {EventKind::Block, "block"},
    {EventKind::Delivery, "delivery"},
    {EventKind::Drop, "drop"},
    {EventKind::Tamper, "tamper"},
    {EventKind::Audit, "audit"},
    {EventKind::Alert, "alert"},
    {EventKind::Remediation, "remediation"},
}};

}  // namespace

std::string_view event_kind_name(EventKind kind) {
  for (const auto& [k, name] : kNames)
    if (k == kind) return name;
  return "?";
}

std::optional<EventKind> event_kind_from_name(std::string_view name) {
  for (const auto& [k, n] : kNames)
    if (n == name) return k;
  return std::nullopt;
}

nlohmann::json event_to_json(const SimulationEvent& e) {
  return {{"v", kTraceSchemaVersion},
          {"tick", e.tick},
          {"seq", e.sequence},
          {"kind", event_kind_name(e.kind)},
          {"details", e.details}};
}

SimulationEvent event_from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("v").get<int>() != kTraceSchemaVersion) throw DataError("unsupported trace schema version");
    auto kind = event_kind_from_name(doc.at("kind").get<std::string>());
    if (!kind) throw DataError("unknown trace event kind");
    return {doc.at("tick").get<std::int64_t>(), doc.at("seq").get<std::uint64_t>(), *kind, doc.at("details")};
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed trace event: ") + e.what());
  }
}

const SimulationEvent& Trace::record(std::int64_t tick, EventKind kind, nlohmann::json details) {
  if (!events_.empty() && tick < events_.back().tick)
    throw StateError("trace events must be recorded in non-decreasing tick order");
  events_.push_back({tick, static_cast<std::uint64_t>(events_.size()), kind, std::move(details)});
  return events_.back();
}

std::size_t Trace::count(EventKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(events_.begin(), events_.end(), [kind](const SimulationEvent& e) { return e.kind == kind; }));
}

std::string Trace::to_jsonl() const {
  std::string out;
  for (const auto& e : events_) {
    out += event_to_json(e).dump();
    out += '\n';
  }
  return out;
}

void Trace::write_jsonl(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write trace file " + path.string());
  out << to_jsonl();
  if (!out) throw DataError("trace write failed: " + path.string());
}

Trace Trace::from_jsonl(std::string_view text) {
  Trace t;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (line.empty()) continue;
    try {
      t.events_.push_back(event_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("trace line is not JSON: ") + e.what());
    }
  }
  return t;
}

}  // namespace iiotsec::sdn
