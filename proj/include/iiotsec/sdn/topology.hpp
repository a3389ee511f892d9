#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace iiotsec::sdn {

struct LinkSpec {
  std::string a;
  std::string b;
};

/// Hosts attach to exactly one switch; switch ports are numbered from 1 in
/// link order.
struct TopologySpec {
  std::vector<std::string> hosts;
  std::vector<std::string> switches;
  std::vector<LinkSpec> links;

  /// client and attacker on s1, server on s2, s1 <-> s2.
  static TopologySpec default_topology();
  /// {"hosts": [...], "switches": [...], "links": [["a", "b"], ...]}
  static TopologySpec from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;
};

inline constexpr const char* kClientHost = "client";
inline constexpr const char* kAttackerHost = "attacker";
inline constexpr const char* kServerHost = "server";

struct PortPeer {
  std::string node;
  int peer_port = 0;  // 0 for a host NIC
};

struct Hop {
  std::string switch_id;
  int out_port = 0;

  friend bool operator==(const Hop&, const Hop&) = default;
};

/// Validated, immutable view of a TopologySpec.
class Topology {
 public:
  /// Throws ConfigError on duplicate ids, unknown link endpoints, host-host
  /// links, hosts without exactly one link, or hosts that cannot reach each other.
  explicit Topology(const TopologySpec& spec);

  const TopologySpec& spec() const noexcept { return spec_; }
  bool is_host(const std::string& id) const { return host_attach_.contains(id); }
  bool is_switch(const std::string& id) const { return ports_.contains(id); }
  const std::vector<std::string>& switch_ids() const noexcept { return spec_.switches; }
  const std::vector<std::string>& host_ids() const noexcept { return spec_.hosts; }

  /// Switch and port a host is plugged into.
  const Hop& attachment(const std::string& host) const;
  const std::map<int, PortPeer>& ports(const std::string& switch_id) const;
  std::optional<PortPeer> peer(const std::string& switch_id, int port) const;

  /// Shortest switch path (BFS, lower port numbers first) from `from_switch`
  /// to the host, with the output port at each switch. Empty if unreachable.
  std::vector<Hop> path_to_host(const std::string& from_switch, const std::string& host) const;

 private:
  TopologySpec spec_;
  std::map<std::string, Hop> host_attach_;
  std::map<std::string, std::map<int, PortPeer>> ports_;
};

}  // namespace iiotsec::sdn
