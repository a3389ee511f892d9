#include "iiotsec/sdn/topology.hpp"

#include <deque>
#include <set>

#include "iiotsec/common/error.hpp"

namespace iiotsec::sdn {

TopologySpec TopologySpec::default_topology() {
  return {{kClientHost, kAttackerHost, kServerHost},
          {"s1", "s2"},
          {{kClientHost, "s1"}, {kAttackerHost, "s1"}, {"s1", "s2"}, {kServerHost, "s2"}}};
}

TopologySpec TopologySpec::from_json(const nlohmann::json& doc) {
  TopologySpec spec;
  try {
    spec.hosts = doc.at("hosts").get<std::vector<std::string>>();
    spec.switches = doc.at("switches").get<std::vector<std::string>>();
    for (const auto& link : doc.at("links")) {
      const auto ends = link.get<std::vector<std::string>>();
      if (ends.size() != 2) throw ConfigError("a link needs exactly two endpoints");
      spec.links.push_back({ends[0], ends[1]});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed topology: ") + e.what());
  }
  return spec;
}

nlohmann::json TopologySpec::to_json() const {
  nlohmann::json links = nlohmann::json::array();
  for (const auto& l : this->links) links.push_back({l.a, l.b});
  return {{"hosts", hosts}, {"switches", switches}, {"links", links}};
}

Topology::Topology(const TopologySpec& spec) : spec_(spec) {
  std::set<std::string> ids;
  for (const auto& list : {spec.hosts, spec.switches})
    for (const auto& id : list) {
      if (id.empty()) throw ConfigError("topology: empty node id");
      if (!ids.insert(id).second) throw ConfigError("topology: duplicate id '" + id + "'");
    }
  for (const auto& s : spec.switches) ports_[s];
  const std::set<std::string> hosts(spec.hosts.begin(), spec.hosts.end());

  std::map<std::string, int> next_port;
  auto allocate = [&](const std::string& sw) { return ++next_port[sw]; };
  for (const auto& link : spec.links) {
    if (!ids.contains(link.a) || !ids.contains(link.b))
      throw ConfigError("topology: link references unknown node '" + (ids.contains(link.a) ? link.b : link.a) + "'");
    if (link.a == link.b) throw ConfigError("topology: self-link on '" + link.a + "'");
    const bool a_host = hosts.contains(link.a), b_host = hosts.contains(link.b);
    if (a_host && b_host) throw ConfigError("topology: hosts must connect to switches");
    if (a_host || b_host) {
      const auto& host = a_host ? link.a : link.b;
      const auto& sw = a_host ? link.b : link.a;
      if (host_attach_.contains(host)) throw ConfigError("topology: host '" + host + "' has more than one link");
      const int port = allocate(sw);
      ports_[sw][port] = {host, 0};
      host_attach_[host] = {sw, port};
    } else {
      const int pa = allocate(link.a), pb = allocate(link.b);
      ports_[link.a][pa] = {link.b, pb};
      ports_[link.b][pb] = {link.a, pa};
    }
  }
  for (const auto& h : spec.hosts)
    if (!host_attach_.contains(h)) throw ConfigError("topology: host '" + h + "' has no link (disconnected)");
  if (!spec.hosts.empty()) {
    const auto& origin = host_attach_.at(spec.hosts.front()).switch_id;
    for (const auto& h : spec.hosts)
      if (path_to_host(origin, h).empty())
        throw ConfigError("topology: host '" + h + "' is unreachable from '" + spec.hosts.front() + "' (disconnected)");
  }
}

const Hop& Topology::attachment(const std::string& host) const {
  const auto it = host_attach_.find(host);
  if (it == host_attach_.end()) throw ConfigError("unknown host '" + host + "'");
  return it->second;
}

const std::map<int, PortPeer>& Topology::ports(const std::string& switch_id) const {
  const auto it = ports_.find(switch_id);
  if (it == ports_.end()) throw ConfigError("unknown switch '" + switch_id + "'");
  return it->second;
}

std::optional<PortPeer> Topology::peer(const std::string& switch_id, int port) const {
  const auto& p = ports(switch_id);
  const auto it = p.find(port);
  if (it == p.end()) return std::nullopt;
  return it->second;
}

std::vector<Hop> Topology::path_to_host(const std::string& from_switch, const std::string& host) const {
  const auto target = host_attach_.find(host);
  if (target == host_attach_.end() || !ports_.contains(from_switch)) return {};
  // BFS over switches; parent[sw] = (previous switch, its out port toward sw)
  std::map<std::string, Hop> parent;
  std::set<std::string> seen{from_switch};
  std::deque<std::string> queue{from_switch};
  while (!queue.empty()) {
    const auto sw = queue.front();
    queue.pop_front();
    if (sw == target->second.switch_id) break;
    for (const auto& [port, peer] : ports_.at(sw)) {
      if (!ports_.contains(peer.node) || seen.contains(peer.node)) continue;
      seen.insert(peer.node);
      parent[peer.node] = {sw, port};
      queue.push_back(peer.node);
    }
  }
  if (!seen.contains(target->second.switch_id)) return {};
  std::vector<Hop> reversed{{target->second.switch_id, target->second.out_port}};
  for (auto sw = target->second.switch_id; sw != from_switch;) {
    const Hop& p = parent.at(sw);
    reversed.push_back(p);
    sw = p.switch_id;
  }
  return {reversed.rbegin(), reversed.rend()};
}

}  // namespace iiotsec::sdn
