#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "iiotsec/ledger/chain.hpp"
#include "iiotsec/sdn/controller.hpp"
#include "iiotsec/sdn/packet.hpp"
#include "iiotsec/sdn/switch.hpp"
#include "iiotsec/sdn/topology.hpp"
#include "iiotsec/sdn/trace.hpp"

namespace iiotsec::sdn {

struct PacketOutcome {
  enum class Kind { Delivered, Dropped };
  Kind kind = Kind::Dropped;
  std::string delivered_to;             // host id when Delivered
  std::vector<std::string> switches;    // switches visited, in order
  std::vector<ControllerDecision> decisions;
  std::string reason;                   // why it was dropped
};

/// Single-threaded simulator: the network, its controller and the chain the
/// controller publishes to. Ticks supplied to it must not decrease.
class Simulation {
 public:
  static constexpr std::size_t kHopLimit = 16;

  explicit Simulation(const TopologySpec& spec);
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  const Topology& topology() const noexcept { return topology_; }
  Network& network() noexcept { return network_; }
  const Network& network() const noexcept { return network_; }
  Controller& controller() noexcept { return controller_; }
  const Controller& controller() const noexcept { return controller_; }
  const ledger::Chain& chain() const noexcept { return chain_; }
  Trace& trace() noexcept { return trace_; }
  const Trace& trace() const noexcept { return trace_; }

  /// Writes the current chain to `path` and persists every later block there.
  void set_ledger_file(const std::filesystem::path& path);
  /// Replaces the ledger publisher (nullptr restores the built-in one).
  void set_publisher(LedgerPublisher* publisher);

  /// Injects a packet at the switch its source host is attached to.
  PacketOutcome send_packet(const Packet& pkt, std::int64_t tick);

  std::map<std::string, FlowTableSnapshot> dump_all(std::int64_t tick) const;

 private:
  Topology topology_;
  Network network_;
  ledger::Chain chain_;
  ChainPublisher publisher_;
  Controller controller_;
  Trace trace_;
};

std::unique_ptr<Simulation> build_topology(const TopologySpec& spec);

}  // namespace iiotsec::sdn
