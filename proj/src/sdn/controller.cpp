#include "iiotsec/sdn/controller.hpp"

#include <algorithm>

#include "iiotsec/common/error.hpp"

namespace iiotsec::sdn {

Switch& Network::at(const std::string& switch_id) {
  const auto it = switches.find(switch_id);
  if (it == switches.end()) throw ConfigError("unknown switch '" + switch_id + "'");
  return it->second;
}

const Switch& Network::at(const std::string& switch_id) const {
  const auto it = switches.find(switch_id);
  if (it == switches.end()) throw ConfigError("unknown switch '" + switch_id + "'");
  return it->second;
}

std::uint64_t ChainPublisher::publish(std::vector<ledger::FlowRuleRecord> records, std::int64_t tick) {
  ledger::Block block = ledger::prepare_block(chain_, std::move(records), ledger::NodeRole::Generator, tick);
  if (file_) ledger::append_block_line(file_->string(), block);
  return ledger::commit_block(chain_, std::move(block)).index;
}

std::string_view decision_name(ControllerDecision::Kind kind) {
  switch (kind) {
    case ControllerDecision::Kind::Forward: return "forward";
    case ControllerDecision::Kind::Block: return "block";
    case ControllerDecision::Kind::Drop: return "drop";
    case ControllerDecision::Kind::Failed: return "failed";
  }
  return "?";
}

Controller::Controller(const Topology& topology, LedgerPublisher* publisher)
    : topology_(topology), publisher_(publisher) {}

namespace {

nlohmann::json verdict_json(const IdsVerdict& v, const std::string& switch_id, const Packet& pkt) {
  nlohmann::json d{{"switch_id", switch_id}, {"src", pkt.header.src}, {"value", v.value()}, {"parsed", v.parsed}};
  d["category"] = v.category ? nlohmann::json(dataset::label_name(*v.category)) : nlohmann::json(nullptr);
  return d;
}

}  // namespace

ControllerDecision Controller::on_packet_in(Network& net, const std::string& switch_id, const Packet& pkt,
                                            std::int64_t tick, Trace& trace) {
  trace.record(tick, EventKind::PacketIn, {{"switch_id", switch_id}, {"header", header_to_json(pkt.header)}});
  ControllerDecision decision;

  if (blocklist_.contains(pkt.header.src)) {
    decision.kind = ControllerDecision::Kind::Drop;
    return decision;
  }

  const IdsVerdict verdict = ids_.classify(pkt.payload);
  trace.record(tick, EventKind::IdsVerdict, verdict_json(verdict, switch_id, pkt));

  if (verdict.malicious) {
    const std::string ingress =
        topology_.is_host(pkt.header.src) ? topology_.attachment(pkt.header.src).switch_id : switch_id;
    flow::FlowRule rule;
    rule.rule_id = next_rule_id_++;
    rule.match.src = pkt.header.src;
    rule.action = flow::Action::drop();
    rule.issued_at = tick;
    net.at(ingress).install(rule, tick, InstallPosition::Front);
    block_rules_[ingress].insert(block_rules_[ingress].begin(), rule);
    blocklist_.insert(pkt.header.src);
    trace.record(tick, EventKind::Block,
                 {{"switch_id", ingress}, {"host", pkt.header.src}, {"rule", flow::rule_to_json(rule)}});
    decision.kind = ControllerDecision::Kind::Block;
    return decision;
  }

  if (!topology_.is_host(pkt.header.dst)) {
    decision.kind = ControllerDecision::Kind::Drop;
    return decision;
  }
  const auto path = topology_.path_to_host(switch_id, pkt.header.dst);
  if (path.empty()) {
    decision.kind = ControllerDecision::Kind::Drop;
    return decision;
  }

  std::vector<ledger::FlowRuleRecord> records;
  std::uint64_t id = next_rule_id_;
  for (const Hop& hop : path) {
    flow::FlowRule rule;
    rule.rule_id = id++;
    rule.match.src = pkt.header.src;
    rule.match.dst = pkt.header.dst;
    rule.match.proto = pkt.header.proto;
    rule.match.dst_port = pkt.header.dst_port;
    rule.action = flow::Action::forward(hop.out_port);
    rule.issued_at = tick;
    records.push_back({rule, hop.switch_id});
  }

  if (!publisher_) {
    trace.record(tick, EventKind::LedgerFailure, {{"reason", "no ledger publisher"}});
    decision.kind = ControllerDecision::Kind::Failed;
    return decision;
  }
  try {
    decision.block_index = publisher_->publish(records, tick);
  } catch (const std::exception& e) {
    trace.record(tick, EventKind::LedgerFailure, {{"reason", e.what()}});
    decision.kind = ControllerDecision::Kind::Failed;
    return decision;
  }
  next_rule_id_ = id;

  nlohmann::json ids = nlohmann::json::array();
  for (const auto& r : records) ids.push_back(r.rule.rule_id);
  trace.record(tick, EventKind::LedgerAppend, {{"block_index", *decision.block_index}, {"rule_ids", ids}});
  for (const auto& r : records) {
    net.at(r.switch_id).install(r.rule, tick, InstallPosition::Back);
    trace.record(tick, EventKind::RuleInstall, {{"switch_id", r.switch_id}, {"rule", flow::rule_to_json(r.rule)}});
    forward_rules_.push_back(r);
  }
  decision.kind = ControllerDecision::Kind::Forward;
  decision.installed = std::move(records);
  return decision;
}

std::size_t Controller::remediate(Network& net, const std::string& switch_id, std::int64_t tick, Trace& trace) {
  Switch& sw = net.at(switch_id);
  std::vector<flow::FlowRule> expected;
  if (const auto it = block_rules_.find(switch_id); it != block_rules_.end()) expected = it->second;
  for (const auto& r : forward_rules_)
    if (r.switch_id == switch_id) expected.push_back(r.rule);

  const auto& current = sw.table();
  std::vector<bool> kept(current.size(), false);
  std::vector<FlowTableEntry> next;
  std::size_t restored = 0;
  for (const auto& rule : expected) {
    const auto it = std::find_if(current.begin(), current.end(), [&](const FlowTableEntry& e) { return e.rule == rule; });
    if (it != current.end() && !kept[static_cast<std::size_t>(it - current.begin())]) {
      kept[static_cast<std::size_t>(it - current.begin())] = true;
      next.push_back(*it);
    } else {
      next.push_back({rule, tick, 0});
      ++restored;
    }
  }
  const auto removed = static_cast<std::size_t>(std::count(kept.begin(), kept.end(), false));
  sw.replace_table(std::move(next));
  trace.record(tick, EventKind::Remediation,
               {{"switch_id", switch_id}, {"removed", removed}, {"restored", restored}});
  return removed + restored;
}

}  // namespace iiotsec::sdn
