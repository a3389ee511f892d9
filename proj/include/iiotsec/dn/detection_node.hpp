#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "iiotsec/ledger/chain.hpp"
#include "iiotsec/sdn/simulation.hpp"
#include "iiotsec/sdn/switch.hpp"
#include "iiotsec/sdn/trace.hpp"

namespace iiotsec::dn {

inline constexpr int kAuditSchemaVersion = 1;

/// The two audit files at one tick: ledger records (A) and switch dumps (B).
struct AuditInput {
  std::int64_t tick = 0;
  std::vector<ledger::FlowRuleRecord> ledger_rules;
  std::map<std::string, sdn::FlowTableSnapshot> snapshots;
  ledger::ChainStatus chain_status;

  friend bool operator==(const AuditInput&, const AuditInput&) = default;
};

struct MitmInjection {
  std::string switch_id;
  std::size_t expected_rows = 0;
  std::size_t observed_rows = 0;
  friend bool operator==(const MitmInjection&, const MitmInjection&) = default;
};

struct Modification {
  std::string switch_id;
  std::uint64_t rule_id = 0;  // ledger rule id
  std::vector<flow::FieldDiff> field_diffs;
  std::int64_t hard_age = 0;
  std::int64_t expected_age = 0;  // audit tick - ledger issue tick
  bool hard_age_reset = false;    // hard_age < expected_age
  friend bool operator==(const Modification&, const Modification&) = default;
};

using Finding = std::variant<MitmInjection, Modification>;

enum class VerdictKind { Safe, MitmInjection, Modification };
std::string_view verdict_kind_name(VerdictKind kind);

struct IntegrityVerdict {
  std::int64_t tick = 0;
  std::vector<Finding> findings;  // switches in id order
  std::vector<std::string> evidence;

  bool safe() const noexcept { return findings.empty(); }
  /// MitmInjection if any switch has a row-count mismatch, else Modification
  /// if any content differs, else Safe.
  VerdictKind kind() const noexcept;
  friend bool operator==(const IntegrityVerdict&, const IntegrityVerdict&) = default;
};

nlohmann::json verdict_to_json(const IntegrityVerdict& v);

/// Compares A and B per switch. Drop entries whose rule id is not on the
/// ledger for that switch (the controller's Block rules) are left out of B.
/// Throws LedgerError if the chain behind A is broken.
IntegrityVerdict audit(const AuditInput& input);

/// Appends an Alert event: level "safe" or "attack".
const sdn::SimulationEvent& alert_controller(const IntegrityVerdict& verdict, sdn::Trace& trace);

/// Snapshot of every switch plus the full ledger read at `tick`. A broken
/// chain yields no ledger rules and a broken status.
AuditInput collect(const sdn::Simulation& sim, const ledger::Chain& chain, std::int64_t tick);

/// File A: header line then one ledger record per line. File B: header line
/// then one table row per line, switches in id order.
void write_audit_files(const AuditInput& input, const std::filesystem::path& ledger_file,
                       const std::filesystem::path& switch_file);
/// Throws DataError on a malformed or mismatched pair of files.
AuditInput read_audit_files(const std::filesystem::path& ledger_file, const std::filesystem::path& switch_file);

}  // namespace iiotsec::dn
