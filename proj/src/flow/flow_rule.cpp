#include "iiotsec/flow/flow_rule.hpp"

#include <charconv>
#include <set>

#include "iiotsec/common/error.hpp"

namespace iiotsec::flow {
namespace {

std::optional<int> parse_int(std::string_view s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

void require_keys(const nlohmann::json& doc, const std::set<std::string>& keys, const char* what) {
  if (!doc.is_object()) throw DataError(std::string(what) + " must be an object");
  std::set<std::string> present;
  for (const auto& [k, v] : doc.items()) present.insert(k);
  if (present != keys) throw DataError(std::string(what) + " has unexpected or missing keys");
}

template <typename T>
nlohmann::json optional_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json();
}

}  // namespace

std::string_view protocol_name(Protocol p) {
  switch (p) {
    case Protocol::Tcp: return "tcp";
    case Protocol::Udp: return "udp";
    case Protocol::Icmp: return "icmp";
  }
  return "?";
}

std::optional<Protocol> protocol_from_name(std::string_view name) {
  if (name == "tcp") return Protocol::Tcp;
  if (name == "udp") return Protocol::Udp;
  if (name == "icmp") return Protocol::Icmp;
  return std::nullopt;
}

bool Match::matches(const PacketHeader& h) const {
  return (!src || *src == h.src) && (!dst || *dst == h.dst) && (!proto || *proto == h.proto) &&
         (!dst_port || *dst_port == h.dst_port);
}

std::string action_to_string(const Action& a) {
  return a.is_forward() ? "forward:" + std::to_string(a.port) : "drop";
}

std::optional<Action> action_from_string(std::string_view text) {
  if (text == "drop") return Action::drop();
  constexpr std::string_view prefix = "forward:";
  if (text.substr(0, prefix.size()) == prefix) {
    if (auto port = parse_int(text.substr(prefix.size())); port && *port > 0) return Action::forward(*port);
  }
  return std::nullopt;
}

std::string_view field_name(RuleField f) {
  switch (f) {
    case RuleField::Src: return "src";
    case RuleField::Dst: return "dst";
    case RuleField::Proto: return "proto";
    case RuleField::DstPort: return "dst_port";
    case RuleField::Action: return "action";
  }
  return "?";
}

std::optional<RuleField> field_from_name(std::string_view name) {
  for (auto f : {RuleField::Src, RuleField::Dst, RuleField::Proto, RuleField::DstPort, RuleField::Action})
    if (field_name(f) == name) return f;
  return std::nullopt;
}

std::string field_value(const FlowRule& rule, RuleField f) {
  const Match& m = rule.match;
  switch (f) {
    case RuleField::Src: return m.src.value_or("*");
    case RuleField::Dst: return m.dst.value_or("*");
    case RuleField::Proto: return m.proto ? std::string(protocol_name(*m.proto)) : "*";
    case RuleField::DstPort: return m.dst_port ? std::to_string(*m.dst_port) : "*";
    case RuleField::Action: return action_to_string(rule.action);
  }
  return {};
}

void set_field_value(FlowRule& rule, RuleField f, std::string_view value) {
  const bool wildcard = value == "*";
  Match& m = rule.match;
  switch (f) {
    case RuleField::Src:
      m.src = wildcard ? std::nullopt : std::optional<std::string>(value);
      break;
    case RuleField::Dst:
      m.dst = wildcard ? std::nullopt : std::optional<std::string>(value);
      break;
    case RuleField::Proto:
      if (wildcard) {
        m.proto.reset();
      } else if (auto p = protocol_from_name(value)) {
        m.proto = *p;
      } else {
        throw ConfigError("unknown protocol: " + std::string(value));
      }
      break;
    case RuleField::DstPort:
      if (wildcard) {
        m.dst_port.reset();
      } else if (auto p = parse_int(value)) {
        m.dst_port = *p;
      } else {
        throw ConfigError("bad port: " + std::string(value));
      }
      break;
    case RuleField::Action:
      if (auto a = action_from_string(value)) {
        rule.action = *a;
      } else {
        throw ConfigError("bad action (want forward:N or drop): " + std::string(value));
      }
      break;
  }
  if (m.empty()) throw ConfigError("a flow rule match must not be empty");
}

std::vector<FieldDiff> diff_rules(const FlowRule& expected, const FlowRule& observed) {
  std::vector<FieldDiff> diffs;
  for (auto f : {RuleField::Src, RuleField::Dst, RuleField::Proto, RuleField::DstPort, RuleField::Action}) {
    auto e = field_value(expected, f), o = field_value(observed, f);
    if (e != o) diffs.push_back({std::string(field_name(f)), std::move(e), std::move(o)});
  }
  if (expected.rule_id != observed.rule_id)
    diffs.push_back({"rule_id", std::to_string(expected.rule_id), std::to_string(observed.rule_id)});
  return diffs;
}

nlohmann::json rule_to_json(const FlowRule& r) {
  nlohmann::json match = {{"src", optional_json(r.match.src)},
                          {"dst", optional_json(r.match.dst)},
                          {"proto", r.match.proto ? nlohmann::json(protocol_name(*r.match.proto)) : nlohmann::json()},
                          {"dst_port", optional_json(r.match.dst_port)}};
  nlohmann::json action = {{"kind", r.action.is_forward() ? "forward" : "drop"}, {"port", r.action.port}};
  return {{"rule_id", r.rule_id}, {"match", std::move(match)}, {"action", std::move(action)},
          {"issued_at", r.issued_at}};
}

FlowRule rule_from_json(const nlohmann::json& doc) {
  require_keys(doc, {"rule_id", "match", "action", "issued_at"}, "flow rule");
  const auto& m = doc["match"];
  const auto& a = doc["action"];
  require_keys(m, {"src", "dst", "proto", "dst_port"}, "flow rule match");
  require_keys(a, {"kind", "port"}, "flow rule action");
  FlowRule r;
  try {
    const auto& id = doc["rule_id"];
    const bool id_ok = id.is_number_unsigned() || (id.is_number_integer() && id.get<std::int64_t>() >= 0);
    if (!id_ok || !doc["issued_at"].is_number_integer())
      throw DataError("flow rule: rule_id/issued_at must be integers");
    r.rule_id = doc["rule_id"].get<std::uint64_t>();
    r.issued_at = doc["issued_at"].get<std::int64_t>();
    if (!m["src"].is_null()) r.match.src = m["src"].get<std::string>();
    if (!m["dst"].is_null()) r.match.dst = m["dst"].get<std::string>();
    if (!m["proto"].is_null()) {
      auto p = protocol_from_name(m["proto"].get<std::string>());
      if (!p) throw DataError("flow rule: unknown protocol");
      r.match.proto = *p;
    }
    if (!m["dst_port"].is_null()) {
      if (!m["dst_port"].is_number_integer()) throw DataError("flow rule: dst_port must be an integer");
      r.match.dst_port = m["dst_port"].get<int>();
    }
    const auto kind = a["kind"].get<std::string>();
    if (!a["port"].is_number_integer()) throw DataError("flow rule: action port must be an integer");
    if (kind == "forward") {
      r.action = Action::forward(a["port"].get<int>());
    } else if (kind == "drop") {
      r.action = Action::drop();
      if (a["port"].get<int>() != 0) throw DataError("flow rule: drop action with a port");
    } else {
      throw DataError("flow rule: unknown action kind '" + kind + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("flow rule: ") + e.what());
  }
  if (r.match.empty()) throw DataError("flow rule: empty match");
  return r;
}

FlowRule rule_from_script(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("rule must be an object");
  FlowRule r;
  try {
    r.rule_id = doc.value("rule_id", std::uint64_t{0});
    r.issued_at = doc.value("issued_at", std::int64_t{0});
    const nlohmann::json m = doc.value("match", nlohmann::json::object());
    if (m.contains("src") && !m["src"].is_null()) r.match.src = m["src"].get<std::string>();
    if (m.contains("dst") && !m["dst"].is_null()) r.match.dst = m["dst"].get<std::string>();
    if (m.contains("proto") && !m["proto"].is_null()) {
      auto p = protocol_from_name(m["proto"].get<std::string>());
      if (!p) throw ConfigError("unknown protocol in rule");
      r.match.proto = *p;
    }
    if (m.contains("dst_port") && !m["dst_port"].is_null()) r.match.dst_port = m["dst_port"].get<int>();
    const auto action = doc.value("action", std::string("drop"));
    auto a = action_from_string(action);
    if (!a) throw ConfigError("bad rule action: " + action);
    r.action = *a;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed rule: ") + e.what());
  }
  if (r.match.empty()) throw ConfigError("a flow rule match must not be empty");
  return r;
}

}  // namespace iiotsec::flow
