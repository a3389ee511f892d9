#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "iiotsec/common/rng.hpp"
#include "iiotsec/dataset/records.hpp"
#include "iiotsec/flow/flow_rule.hpp"
#include "iiotsec/sdn/simulation.hpp"

namespace iiotsec::attack {

/// Payload attack: the attacker sends a reading of an attack class.
struct CommandInjection {
  std::string target = sdn::kServerHost;
  dataset::ClassLabel4 category = dataset::ClassLabel4::Injection;
};

/// Southbound attacks on installed table entries.
struct RuleModify {
  std::string switch_id;
  std::uint64_t rule_id = 0;
  flow::RuleField field = flow::RuleField::Action;
  std::string new_value;
};

struct RuleInject {
  std::string switch_id;
  flow::FlowRule rule;
  sdn::InstallPosition position = sdn::InstallPosition::Front;
};

struct RuleDelete {
  std::string switch_id;
  std::uint64_t rule_id = 0;
};

using AttackAction = std::variant<CommandInjection, RuleModify, RuleInject, RuleDelete>;

/// Held-out raw records grouped by four-class label, each group shuffled
/// once. Draws walk a group without replacement.
class PayloadPool {
 public:
  PayloadPool(std::span<const dataset::RawRecord> held_out, std::uint64_t seed);

  /// Throws DataError when the class has no samples left.
  dataset::RawFeatures draw(dataset::ClassLabel4 category);
  std::size_t remaining(dataset::ClassLabel4 category) const;

 private:
  std::map<dataset::ClassLabel4, std::vector<dataset::RawFeatures>> pools_;
  std::map<dataset::ClassLabel4, std::size_t> next_;
};

/// Raw 27-value payload of an attack class. Throws ConfigError for Normal and
/// DataError when the class is exhausted.
std::vector<double> craft_malicious_payload(PayloadPool& pool, dataset::ClassLabel4 category);

/// Applies a RuleModify/RuleInject/RuleDelete directly to a switch table.
/// The ledger and controller are not touched; a modified entry's hard_age
/// restarts at `tick`. Throws ConfigError for an unknown switch or rule id,
/// or for a CommandInjection action.
void mitm_tamper(sdn::Simulation& sim, const AttackAction& action, std::int64_t tick);

}  // namespace iiotsec::attack
