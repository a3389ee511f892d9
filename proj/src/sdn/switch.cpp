#include "iiotsec/sdn/switch.hpp"

#include <algorithm>

#include "iiotsec/common/error.hpp"

namespace iiotsec::sdn {

nlohmann::json header_to_json(const flow::PacketHeader& h) {
  return {{"src", h.src},
          {"dst", h.dst},
          {"src_port", h.src_port},
          {"dst_port", h.dst_port},
          {"proto", flow::protocol_name(h.proto)}};
}

nlohmann::json snapshot_row_to_json(const std::string& switch_id, const SnapshotRow& row) {
  return {{"switch_id", switch_id},
          {"rule", flow::rule_to_json(row.rule)},
          {"hard_age", row.hard_age},
          {"packet_count", row.packet_count}};
}

SnapshotRow snapshot_row_from_json(const nlohmann::json& doc, std::string* switch_id) {
  try {
    if (switch_id) *switch_id = doc.at("switch_id").get<std::string>();
    return {flow::rule_from_json(doc.at("rule")), doc.at("hard_age").get<std::int64_t>(),
            doc.at("packet_count").get<std::uint64_t>()};
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed flow table row: ") + e.what());
  }
}

ProcessResult Switch::process(const flow::PacketHeader& header, std::int64_t /*tick*/) {
  for (auto& entry : table_) {
    if (!entry.rule.match.matches(header)) continue;
    ++entry.packet_count;
    if (entry.rule.action.is_forward())
      return {ProcessResult::Kind::Forwarded, entry.rule.action.port, entry.rule.rule_id};
    return {ProcessResult::Kind::Dropped, 0, entry.rule.rule_id};
  }
  return {ProcessResult::Kind::PacketIn, 0, std::nullopt};
}

void Switch::install(flow::FlowRule rule, std::int64_t tick, InstallPosition where) {
  FlowTableEntry entry{std::move(rule), tick, 0};
  if (where == InstallPosition::Front) {
    table_.insert(table_.begin(), std::move(entry));
  } else {
    table_.push_back(std::move(entry));
  }
}

const FlowTableEntry* Switch::find(std::uint64_t rule_id) const {
  const auto it = std::find_if(table_.begin(), table_.end(),
                               [rule_id](const FlowTableEntry& e) { return e.rule.rule_id == rule_id; });
  return it == table_.end() ? nullptr : &*it;
}

bool Switch::modify(std::uint64_t rule_id, const flow::FlowRule& replacement, std::int64_t tick) {
  for (auto& e : table_) {
    if (e.rule.rule_id != rule_id) continue;
    e.rule = replacement;
    e.last_modified = tick;
    return true;
  }
  return false;
}

bool Switch::remove(std::uint64_t rule_id) {
  const auto it = std::find_if(table_.begin(), table_.end(),
                               [rule_id](const FlowTableEntry& e) { return e.rule.rule_id == rule_id; });
  if (it == table_.end()) return false;
  table_.erase(it);
  return true;
}

FlowTableSnapshot Switch::dump(std::int64_t tick) const {
  FlowTableSnapshot snap{id_, tick, {}};
  snap.rows.reserve(table_.size());
  for (const auto& e : table_) snap.rows.push_back({e.rule, e.hard_age(tick), e.packet_count});
  return snap;
}

}  // namespace iiotsec::sdn
