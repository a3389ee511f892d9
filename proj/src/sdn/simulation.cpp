#include "iiotsec/sdn/simulation.hpp"

#include <set>

#include "iiotsec/common/error.hpp"

namespace iiotsec::sdn {

Simulation::Simulation(const TopologySpec& spec)
    : topology_(spec), publisher_(chain_), controller_(topology_, &publisher_) {
  network_.topology = &topology_;
  for (const auto& id : topology_.switch_ids()) network_.switches.emplace(id, Switch(id));
}

void Simulation::set_ledger_file(const std::filesystem::path& path) {
  ledger::save_chain_file(path.string(), chain_);
  publisher_.set_file(path);
}

void Simulation::set_publisher(LedgerPublisher* publisher) {
  controller_.set_publisher(publisher ? publisher : &publisher_);
}

namespace {

nlohmann::json payload_json(const Payload& p) {
  if (const auto* v = std::get_if<std::vector<double>>(&p)) return {{"type", "reading"}, {"values", *v}};
  return {{"type", "opaque"}, {"size", std::get<OpaquePayload>(p).bytes.size()}};
}

}  // namespace

PacketOutcome Simulation::send_packet(const Packet& pkt, std::int64_t tick) {
  if (!topology_.is_host(pkt.header.src)) throw ConfigError("unknown source host '" + pkt.header.src + "'");
  trace_.record(tick, EventKind::PacketSent, {{"header", header_to_json(pkt.header)}, {"payload", payload_json(pkt.payload)}});

  PacketOutcome out;
  auto drop = [&](std::string reason, const std::string& at) {
    out.kind = PacketOutcome::Kind::Dropped;
    out.reason = std::move(reason);
    trace_.record(tick, EventKind::Drop, {{"src", pkt.header.src}, {"switch_id", at}, {"reason", out.reason}});
    return out;
  };

  std::string current = topology_.attachment(pkt.header.src).switch_id;
  std::set<std::string> asked;  // at most one packet-in per switch per packet
  for (std::size_t hops = 0; hops < kHopLimit; ++hops) {
    out.switches.push_back(current);
    Switch& sw = network_.at(current);
    ProcessResult res = sw.process(pkt.header, tick);
    if (res.kind == ProcessResult::Kind::PacketIn) {
      if (!asked.insert(current).second) return drop("table miss after controller decision", current);
      ControllerDecision d = controller_.on_packet_in(network_, current, pkt, tick, trace_);
      const auto kind = d.kind;
      out.decisions.push_back(std::move(d));
      if (kind == ControllerDecision::Kind::Drop) return drop("controller drop", current);
      if (kind == ControllerDecision::Kind::Failed) return drop("ledger failure", current);
      res = sw.process(pkt.header, tick);
      if (res.kind == ProcessResult::Kind::PacketIn) return drop("table miss after controller decision", current);
    }
    if (res.kind == ProcessResult::Kind::Dropped) {
      return drop(res.rule_id ? "drop rule " + std::to_string(*res.rule_id) : "drop rule", current);
    }
    const auto peer = topology_.peer(current, res.port);
    if (!peer) return drop("dead port " + std::to_string(res.port), current);
    if (topology_.is_host(peer->node)) {
      out.kind = PacketOutcome::Kind::Delivered;
      out.delivered_to = peer->node;
      trace_.record(tick, EventKind::Delivery,
                    {{"src", pkt.header.src}, {"dst", pkt.header.dst}, {"to", peer->node}, {"switch_id", current}});
      return out;
    }
    current = peer->node;
  }
  return drop("hop limit exceeded", current);
}

std::map<std::string, FlowTableSnapshot> Simulation::dump_all(std::int64_t tick) const {
  std::map<std::string, FlowTableSnapshot> out;
  for (const auto& [id, sw] : network_.switches) out.emplace(id, sw.dump(tick));
  return out;
}

std::unique_ptr<Simulation> build_topology(const TopologySpec& spec) { return std::make_unique<Simulation>(spec); }

}  // namespace iiotsec::sdn
