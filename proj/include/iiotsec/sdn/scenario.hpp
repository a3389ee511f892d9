#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "iiotsec/attack/attack.hpp"
#include "iiotsec/dn/detection_node.hpp"
#include "iiotsec/sdn/simulation.hpp"

namespace iiotsec::scenario {

enum class ActionKind { SendPacket, TamperRule, InjectRule, DeleteRule, DnAudit };
std::string_view action_name(ActionKind kind);

struct Step {
  std::int64_t tick = 0;
  std::string actor;
  ActionKind action = ActionKind::SendPacket;
  nlohmann::json params = nlohmann::json::object();
};

/// A script is either a bare JSON list of {tick, actor, action, params} or an
/// object {"name", "topology"?, "steps": [...]}. Steps run in tick order;
/// steps sharing a tick keep script order.
struct Scenario {
  std::string name;
  std::optional<sdn::TopologySpec> topology;
  std::vector<Step> steps;
};

/// Throws ConfigError on unknown actions, negative ticks or malformed params.
Scenario parse_scenario(const nlohmann::json& doc, std::string name = "scenario");
Scenario load_scenario(const std::filesystem::path& path);

struct Environment {
  attack::PayloadPool* payloads = nullptr;  // needed for payloads given by class
  /// When set, each audit writes its two files and an alerts.jsonl line here
  /// and the verdict is computed from the files read back.
  std::optional<std::filesystem::path> audit_dir;
};

struct Outcome {
  std::vector<sdn::PacketOutcome> packets;
  std::vector<dn::IntegrityVerdict> verdicts;
  std::vector<std::string> failed_expectations;

  bool expectations_met() const noexcept { return failed_expectations.empty(); }
};

/// Runs the steps against `sim`. Optional "expect" entries in step params are
/// checked and mismatches listed in the outcome; they never stop the run.
Outcome run_scenario(sdn::Simulation& sim, const Scenario& script, const Environment& env);

/// Audit file names used for the n-th audit (0-based).
std::filesystem::path audit_ledger_file(const std::filesystem::path& dir, std::size_t n);
std::filesystem::path audit_switch_file(const std::filesystem::path& dir, std::size_t n);

}  // namespace iiotsec::scenario
