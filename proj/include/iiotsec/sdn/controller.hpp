#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "iiotsec/ledger/chain.hpp"
#include "iiotsec/sdn/ids.hpp"
#include "iiotsec/sdn/packet.hpp"
#include "iiotsec/sdn/switch.hpp"
#include "iiotsec/sdn/topology.hpp"
#include "iiotsec/sdn/trace.hpp"

namespace iiotsec::sdn {

/// Data plane: the topology and one switch per switch id.
struct Network {
  const Topology* topology = nullptr;
  std::map<std::string, Switch> switches;

  Switch& at(const std::string& switch_id);
  const Switch& at(const std::string& switch_id) const;
};

/// Controller side of the ledger. publish returns the new block index and
/// throws on failure.
class LedgerPublisher {
 public:
  virtual ~LedgerPublisher() = default;
  virtual std::uint64_t publish(std::vector<ledger::FlowRuleRecord> records, std::int64_t tick) = 0;
};

/// Appends to an in-memory chain, writing the block line to `file` first
/// when one is set, so a failed write leaves the chain untouched.
class ChainPublisher : public LedgerPublisher {
 public:
  explicit ChainPublisher(ledger::Chain& chain, std::optional<std::filesystem::path> file = std::nullopt)
      : chain_(chain), file_(std::move(file)) {}
  std::uint64_t publish(std::vector<ledger::FlowRuleRecord> records, std::int64_t tick) override;
  void set_file(std::optional<std::filesystem::path> file) { file_ = std::move(file); }

 private:
  ledger::Chain& chain_;
  std::optional<std::filesystem::path> file_;
};

struct ControllerDecision {
  enum class Kind { Forward, Block, Drop, Failed };
  Kind kind = Kind::Drop;
  std::vector<ledger::FlowRuleRecord> installed;
  std::optional<std::uint64_t> block_index;  // ledger block for a Forward decision
};

std::string_view decision_name(ControllerDecision::Kind kind);

class Controller {
 public:
  Controller(const Topology& topology, LedgerPublisher* publisher);

  IdsApplication& ids() noexcept { return ids_; }
  const IdsApplication& ids() const noexcept { return ids_; }
  void set_publisher(LedgerPublisher* publisher) { publisher_ = publisher; }

  /// Packet-in handling: IDS first, then either a Block rule on the ingress
  /// switch (no ledger write) or Forward rules on every switch of the path,
  /// published to the ledger before any is installed.
  ControllerDecision on_packet_in(Network& net, const std::string& switch_id, const Packet& pkt, std::int64_t tick,
                                  Trace& trace);

  /// Restores a switch table to the controller's view: its Block rules
  /// first, then its published Forward rules. Entries that already match
  /// are kept untouched. Returns the number of entries added or removed.
  std::size_t remediate(Network& net, const std::string& switch_id, std::int64_t tick, Trace& trace);

  const std::set<std::string>& blocklist() const noexcept { return blocklist_; }
  /// Forward rules the controller believes installed, in publish order.
  const std::vector<ledger::FlowRuleRecord>& installed_forward_rules() const noexcept { return forward_rules_; }
  const std::map<std::string, std::vector<flow::FlowRule>>& block_rules() const noexcept { return block_rules_; }

 private:
  const Topology& topology_;
  LedgerPublisher* publisher_;
  IdsApplication ids_;
  std::set<std::string> blocklist_;
  std::uint64_t next_rule_id_ = 1;
  std::vector<ledger::FlowRuleRecord> forward_rules_;
  std::map<std::string, std::vector<flow::FlowRule>> block_rules_;
};

}  // namespace iiotsec::sdn
