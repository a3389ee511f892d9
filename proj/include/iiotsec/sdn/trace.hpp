#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace iiotsec::sdn {

inline constexpr int kTraceSchemaVersion = 1;

enum class EventKind {
  PacketSent,
  PacketIn,
  IdsVerdict,
  RuleInstall,
  LedgerAppend,
  LedgerFailure,
  Block,
  Delivery,
  Drop,
  Tamper,
  Audit,
  Alert,
  Remediation,
};

std::string_view event_kind_name(EventKind kind);
std::optional<EventKind> event_kind_from_name(std::string_view name);

struct SimulationEvent {
  std::int64_t tick = 0;
  std::uint64_t sequence = 0;
  EventKind kind = EventKind::PacketSent;
  nlohmann::json details = nlohmann::json::object();

  friend bool operator==(const SimulationEvent&, const SimulationEvent&) = default;
};

/// {"v": 1, "tick": ..., "seq": ..., "kind": "...", "details": {...}}
nlohmann::json event_to_json(const SimulationEvent& e);
SimulationEvent event_from_json(const nlohmann::json& doc);

/// Event log totally ordered by (tick, sequence). Ticks never decrease.
class Trace {
 public:
  const SimulationEvent& record(std::int64_t tick, EventKind kind, nlohmann::json details = nlohmann::json::object());

  const std::vector<SimulationEvent>& events() const noexcept { return events_; }
  bool empty() const noexcept { return events_.empty(); }
  std::size_t size() const noexcept { return events_.size(); }
  std::size_t count(EventKind kind) const;

  /// One event per line.
  std::string to_jsonl() const;
  void write_jsonl(const std::filesystem::path& path) const;
  static Trace from_jsonl(std::string_view text);

 private:
  std::vector<SimulationEvent> events_;
};

}  // namespace iiotsec::sdn
