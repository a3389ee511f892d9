#include "iiotsec/attack/attack.hpp"

#include "iiotsec/common/error.hpp"

namespace iiotsec::attack {

PayloadPool::PayloadPool(std::span<const dataset::RawRecord> held_out, std::uint64_t seed) {
  for (const auto& r : held_out) pools_[dataset::regroup_label(r.label8)].push_back(r.features);
  Rng rng(seed);
  for (auto& [label, pool] : pools_) rng.shuffle(std::span<dataset::RawFeatures>(pool));
}

dataset::RawFeatures PayloadPool::draw(dataset::ClassLabel4 category) {
  const auto it = pools_.find(category);
  std::size_t& next = next_[category];
  if (it == pools_.end() || next >= it->second.size())
    throw DataError(std::string("no held-out samples left for class ") + std::string(dataset::label_name(category)));
  return it->second[next++];
}

std::size_t PayloadPool::remaining(dataset::ClassLabel4 category) const {
  const auto it = pools_.find(category);
  if (it == pools_.end()) return 0;
  const auto n = next_.find(category);
  return it->second.size() - (n == next_.end() ? 0 : n->second);
}

std::vector<double> craft_malicious_payload(PayloadPool& pool, dataset::ClassLabel4 category) {
  if (category == dataset::ClassLabel4::Normal) throw ConfigError("malicious payload requested for class Normal");
  const auto f = pool.draw(category);
  return {f.begin(), f.end()};
}

namespace {

struct Tamperer {
  sdn::Simulation& sim;
  std::int64_t tick;

  void operator()(const CommandInjection&) const {
    throw ConfigError("command injection is a payload attack, not a table tamper");
  }

  void operator()(const RuleModify& a) const {
    sdn::Switch& sw = sim.network().at(a.switch_id);
    const sdn::FlowTableEntry* entry = sw.find(a.rule_id);
    if (!entry) throw ConfigError("no rule " + std::to_string(a.rule_id) + " on switch " + a.switch_id);
    flow::FlowRule rule = entry->rule;
    const std::string before = flow::field_value(rule, a.field);
    flow::set_field_value(rule, a.field, a.new_value);
    sw.modify(a.rule_id, rule, tick);
    sim.trace().record(tick, sdn::EventKind::Tamper,
                       {{"type", "modify"},
                        {"switch_id", a.switch_id},
                        {"rule_id", a.rule_id},
                        {"field", flow::field_name(a.field)},
                        {"from", before},
                        {"to", flow::field_value(rule, a.field)}});
  }

  void operator()(const RuleInject& a) const {
    if (a.rule.match.empty()) throw ConfigError("injected rule needs a non-empty match");
    sim.network().at(a.switch_id).install(a.rule, tick, a.position);
    sim.trace().record(tick, sdn::EventKind::Tamper,
                       {{"type", "inject"},
                        {"switch_id", a.switch_id},
                        {"position", a.position == sdn::InstallPosition::Front ? "front" : "back"},
                        {"rule", flow::rule_to_json(a.rule)}});
  }

  void operator()(const RuleDelete& a) const {
    if (!sim.network().at(a.switch_id).remove(a.rule_id))
      throw ConfigError("no rule " + std::to_string(a.rule_id) + " on switch " + a.switch_id);
    sim.trace().record(tick, sdn::EventKind::Tamper,
                       {{"type", "delete"}, {"switch_id", a.switch_id}, {"rule_id", a.rule_id}});
  }
};

}  // namespace

void mitm_tamper(sdn::Simulation& sim, const AttackAction& action, std::int64_t tick) {
  std::visit(Tamperer{sim, tick}, action);
}

}  // namespace iiotsec::attack
