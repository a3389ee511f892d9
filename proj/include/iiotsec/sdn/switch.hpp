#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "iiotsec/flow/flow_rule.hpp"
#include "iiotsec/sdn/packet.hpp"

namespace iiotsec::sdn {

struct FlowTableEntry {
  flow::FlowRule rule;
  std::int64_t last_modified = 0;  // tick of install or last modification
  std::uint64_t packet_count = 0;

  std::int64_t hard_age(std::int64_t tick) const { return tick > last_modified ? tick - last_modified : 0; }
};

struct SnapshotRow {
  flow::FlowRule rule;
  std::int64_t hard_age = 0;
  std::uint64_t packet_count = 0;

  friend bool operator==(const SnapshotRow&, const SnapshotRow&) = default;
};

/// A switch's table dump, rows in table order.
struct FlowTableSnapshot {
  std::string switch_id;
  std::int64_t tick = 0;
  std::vector<SnapshotRow> rows;

  friend bool operator==(const FlowTableSnapshot&, const FlowTableSnapshot&) = default;
};

nlohmann::json snapshot_row_to_json(const std::string& switch_id, const SnapshotRow& row);
SnapshotRow snapshot_row_from_json(const nlohmann::json& doc, std::string* switch_id = nullptr);

struct ProcessResult {
  enum class Kind { Forwarded, Dropped, PacketIn };
  Kind kind = Kind::PacketIn;
  int port = 0;
  std::optional<std::uint64_t> rule_id;
};

enum class InstallPosition { Front, Back };

class Switch {
 public:
  explicit Switch(std::string id) : id_(std::move(id)) {}

  const std::string& id() const noexcept { return id_; }
  const std::vector<FlowTableEntry>& table() const noexcept { return table_; }

  /// First matching entry wins and its packet count is incremented; no match
  /// yields PacketIn.
  ProcessResult process(const flow::PacketHeader& header, std::int64_t tick);

  void install(flow::FlowRule rule, std::int64_t tick, InstallPosition where = InstallPosition::Back);
  const FlowTableEntry* find(std::uint64_t rule_id) const;
  /// Replaces the rule content of an entry and resets its hard_age. Returns
  /// false if no entry has that rule id.
  bool modify(std::uint64_t rule_id, const flow::FlowRule& replacement, std::int64_t tick);
  bool remove(std::uint64_t rule_id);
  void replace_table(std::vector<FlowTableEntry> entries) { table_ = std::move(entries); }

  FlowTableSnapshot dump(std::int64_t tick) const;

 private:
  std::string id_;
  std::vector<FlowTableEntry> table_;
};

inline ProcessResult switch_process(Switch& sw, const Packet& pkt, std::int64_t tick) {
  return sw.process(pkt.header, tick);
}
inline FlowTableSnapshot dump_flow_table(const Switch& sw, std::int64_t tick) { return sw.dump(tick); }

}  // namespace iiotsec::sdn
