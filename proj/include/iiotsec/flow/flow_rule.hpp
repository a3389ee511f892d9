#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace iiotsec::flow {

enum class Protocol { Tcp, Udp, Icmp };

std::string_view protocol_name(Protocol p);
std::optional<Protocol> protocol_from_name(std::string_view name);

struct PacketHeader {
  std::string src;
  std::string dst;
  int src_port = 0;
  int dst_port = 0;
  Protocol proto = Protocol::Tcp;

  friend bool operator==(const PacketHeader&, const PacketHeader&) = default;
};

/// Header match; an unset field is a wildcard.
struct Match {
  std::optional<std::string> src;
  std::optional<std::string> dst;
  std::optional<Protocol> proto;
  std::optional<int> dst_port;

  bool empty() const noexcept { return !src && !dst && !proto && !dst_port; }
  bool matches(const PacketHeader& h) const;

  friend bool operator==(const Match&, const Match&) = default;
};

struct Action {
  enum class Kind { Forward, Drop };
  Kind kind = Kind::Drop;
  int port = 0;  // meaningful for Forward only

  static Action forward(int port) { return {Kind::Forward, port}; }
  static Action drop() { return {Kind::Drop, 0}; }
  bool is_forward() const noexcept { return kind == Kind::Forward; }

  friend bool operator==(const Action&, const Action&) = default;
};

/// "forward:<port>" or "drop"
std::string action_to_string(const Action& a);
std::optional<Action> action_from_string(std::string_view text);

struct FlowRule {
  std::uint64_t rule_id = 0;
  Match match;
  Action action;
  std::int64_t issued_at = 0;  // tick

  friend bool operator==(const FlowRule&, const FlowRule&) = default;
};

/// Editable rule fields, named as in FieldDiff and scenario scripts.
enum class RuleField { Src, Dst, Proto, DstPort, Action };

std::string_view field_name(RuleField f);
std::optional<RuleField> field_from_name(std::string_view name);

/// Field value in script form: host id / "*" for wildcard, protocol name,
/// port number, or action string.
std::string field_value(const FlowRule& rule, RuleField f);
/// Throws ConfigError if the value does not parse for the field.
void set_field_value(FlowRule& rule, RuleField f, std::string_view value);

struct FieldDiff {
  std::string field;
  std::string expected;
  std::string observed;

  friend bool operator==(const FieldDiff&, const FieldDiff&) = default;
};

/// Fields that differ between an expected and an observed rule, in a fixed
/// order (match fields, action, rule_id). issued_at is not compared.
std::vector<FieldDiff> diff_rules(const FlowRule& expected, const FlowRule& observed);

/// JSON form with every key present; wildcards are null. nlohmann's object
/// type keeps keys sorted, so dump() of this is canonical.
nlohmann::json rule_to_json(const FlowRule& rule);
/// Strict inverse of rule_to_json: unknown or missing keys throw DataError.
FlowRule rule_from_json(const nlohmann::json& doc);

/// Permissive parser for scenario scripts: missing match fields are
/// wildcards, action accepts "forward:N"/"drop".
FlowRule rule_from_script(const nlohmann::json& doc);

}  // namespace iiotsec::flow
