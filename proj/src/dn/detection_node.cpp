#include "iiotsec/dn/detection_node.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "iiotsec/common/error.hpp"

namespace iiotsec::dn {

std::string_view verdict_kind_name(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::Safe: return "safe";
    case VerdictKind::MitmInjection: return "mitm_injection";
    case VerdictKind::Modification: return "modification";
  }
  return "?";
}

VerdictKind IntegrityVerdict::kind() const noexcept {
  if (findings.empty()) return VerdictKind::Safe;
  for (const auto& f : findings)
    if (std::holds_alternative<MitmInjection>(f)) return VerdictKind::MitmInjection;
  return VerdictKind::Modification;
}

nlohmann::json verdict_to_json(const IntegrityVerdict& v) {
  nlohmann::json findings = nlohmann::json::array();
  for (const auto& f : v.findings) {
    if (const auto* m = std::get_if<MitmInjection>(&f)) {
      findings.push_back({{"type", "mitm_injection"},
                          {"switch_id", m->switch_id},
                          {"expected_rows", m->expected_rows},
                          {"observed_rows", m->observed_rows}});
    } else {
      const auto& mod = std::get<Modification>(f);
      nlohmann::json diffs = nlohmann::json::array();
      for (const auto& d : mod.field_diffs)
        diffs.push_back({{"field", d.field}, {"expected", d.expected}, {"observed", d.observed}});
      findings.push_back({{"type", "modification"},
                          {"switch_id", mod.switch_id},
                          {"rule_id", mod.rule_id},
                          {"field_diffs", diffs},
                          {"hard_age", mod.hard_age},
                          {"expected_age", mod.expected_age},
                          {"hard_age_reset", mod.hard_age_reset}});
    }
  }
  return {{"v", kAuditSchemaVersion},
          {"tick", v.tick},
          {"verdict", verdict_kind_name(v.kind())},
          {"findings", findings},
          {"evidence", v.evidence}};
}

IntegrityVerdict audit(const AuditInput& input) {
  if (!input.chain_status.valid())
    throw ledger::LedgerError("audit refused: ledger chain broken at block " +
                              std::to_string(*input.chain_status.broken_at) + " (" + input.chain_status.reason + ")");

  std::map<std::string, std::vector<const flow::FlowRule*>> expected;
  for (const auto& r : input.ledger_rules) expected[r.switch_id].push_back(&r.rule);

  std::map<std::string, std::vector<const sdn::SnapshotRow*>> observed;
  for (const auto& [id, snap] : input.snapshots) {
    std::set<std::uint64_t> on_ledger;
    if (const auto it = expected.find(id); it != expected.end())
      for (const auto* rule : it->second) on_ledger.insert(rule->rule_id);
    auto& rows = observed[id];
    for (const auto& row : snap.rows) {
      if (!row.rule.action.is_forward() && !on_ledger.contains(row.rule.rule_id)) continue;
      rows.push_back(&row);
    }
  }

  std::set<std::string> switches;
  for (const auto& [id, v] : expected) switches.insert(id);
  for (const auto& [id, v] : observed) switches.insert(id);

  IntegrityVerdict verdict;
  verdict.tick = input.tick;
  for (const auto& id : switches) {
    const auto& exp = expected[id];
    const auto& obs = observed[id];
    if (exp.size() != obs.size()) {
      verdict.findings.push_back(MitmInjection{id, exp.size(), obs.size()});
      verdict.evidence.push_back(id + ": ledger has " + std::to_string(exp.size()) + " rows, switch has " +
                                 std::to_string(obs.size()));
      continue;
    }
    // Join on rule_id; leftovers on both sides are paired in order.
    std::vector<bool> used(obs.size(), false);
    std::vector<std::pair<const flow::FlowRule*, const sdn::SnapshotRow*>> pairs;
    std::vector<const flow::FlowRule*> unmatched;
    for (const auto* rule : exp) {
      const sdn::SnapshotRow* hit = nullptr;
      for (std::size_t j = 0; j < obs.size(); ++j) {
        if (used[j] || obs[j]->rule.rule_id != rule->rule_id) continue;
        used[j] = true;
        hit = obs[j];
        break;
      }
      if (hit) {
        pairs.emplace_back(rule, hit);
      } else {
        unmatched.push_back(rule);
      }
    }
    std::size_t j = 0;
    for (const auto* rule : unmatched) {
      while (used[j]) ++j;
      used[j] = true;
      pairs.emplace_back(rule, obs[j]);
    }
    for (const auto& [rule, row] : pairs) {
      auto diffs = flow::diff_rules(*rule, row->rule);
      if (diffs.empty()) continue;
      Modification m{id, rule->rule_id, std::move(diffs), row->hard_age, input.tick - rule->issued_at, false};
      m.hard_age_reset = m.hard_age < m.expected_age;
      verdict.evidence.push_back(id + " rule " + std::to_string(m.rule_id) + ": hard_age " +
                                 std::to_string(m.hard_age) + ", expected " + std::to_string(m.expected_age) +
                                 (m.hard_age_reset ? " (reset)" : " (not reset)"));
      verdict.findings.push_back(std::move(m));
    }
  }
  return verdict;
}

const sdn::SimulationEvent& alert_controller(const IntegrityVerdict& verdict, sdn::Trace& trace) {
  nlohmann::json details = verdict_to_json(verdict);
  details["level"] = verdict.safe() ? "safe" : "attack";
  return trace.record(verdict.tick, sdn::EventKind::Alert, std::move(details));
}

AuditInput collect(const sdn::Simulation& sim, const ledger::Chain& chain, std::int64_t tick) {
  AuditInput in;
  in.tick = tick;
  in.chain_status = ledger::validate_chain(chain);
  if (in.chain_status.valid()) in.ledger_rules = ledger::read_rules(chain);
  in.snapshots = sim.dump_all(tick);
  return in;
}

namespace {

nlohmann::json header(std::string_view file, std::int64_t tick) {
  return {{"schema", std::string("iiotsec-audit-") + std::string(file)}, {"v", kAuditSchemaVersion}, {"tick", tick}};
}

void write_lines(const std::filesystem::path& path, const std::vector<nlohmann::json>& lines) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& l : lines) out << l.dump() << '\n';
  if (!out) throw DataError("write failed: " + path.string());
}

std::vector<nlohmann::json> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::vector<nlohmann::json> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      out.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  if (out.empty()) throw DataError(path.string() + ": missing header line");
  return out;
}

std::int64_t check_header(const nlohmann::json& h, std::string_view file, const std::filesystem::path& path) {
  try {
    if (h.at("schema").get<std::string>() != std::string("iiotsec-audit-") + std::string(file) ||
        h.at("v").get<int>() != kAuditSchemaVersion)
      throw DataError(path.string() + ": unexpected audit file header");
    return h.at("tick").get<std::int64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": bad header: " + e.what());
  }
}

}  // namespace

void write_audit_files(const AuditInput& input, const std::filesystem::path& ledger_file,
                       const std::filesystem::path& switch_file) {
  std::vector<nlohmann::json> a{header("ledger", input.tick)};
  a[0]["chain_valid"] = input.chain_status.valid();
  if (!input.chain_status.valid()) {
    a[0]["broken_at"] = *input.chain_status.broken_at;
    a[0]["reason"] = input.chain_status.reason;
  }
  for (const auto& r : input.ledger_rules) a.push_back(ledger::record_to_json(r));
  write_lines(ledger_file, a);

  std::vector<nlohmann::json> b{header("switches", input.tick)};
  nlohmann::json ids = nlohmann::json::array();
  for (const auto& [id, snap] : input.snapshots) ids.push_back(id);
  b[0]["switches"] = ids;
  for (const auto& [id, snap] : input.snapshots)
    for (const auto& row : snap.rows) b.push_back(sdn::snapshot_row_to_json(id, row));
  write_lines(switch_file, b);
}

AuditInput read_audit_files(const std::filesystem::path& ledger_file, const std::filesystem::path& switch_file) {
  const auto a = read_lines(ledger_file);
  const auto b = read_lines(switch_file);
  AuditInput in;
  in.tick = check_header(a[0], "ledger", ledger_file);
  if (check_header(b[0], "switches", switch_file) != in.tick)
    throw DataError("audit files were collected at different ticks");
  try {
    if (!a[0].at("chain_valid").get<bool>())
      in.chain_status = ledger::ChainStatus::broken(a[0].at("broken_at").get<std::size_t>(),
                                                    a[0].at("reason").get<std::string>());
    for (const auto& id : b[0].at("switches")) {
      const auto sid = id.get<std::string>();
      in.snapshots[sid] = sdn::FlowTableSnapshot{sid, in.tick, {}};
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad audit header: ") + e.what());
  }
  for (std::size_t i = 1; i < a.size(); ++i) in.ledger_rules.push_back(ledger::record_from_json(a[i]));
  for (std::size_t i = 1; i < b.size(); ++i) {
    std::string sid;
    auto row = sdn::snapshot_row_from_json(b[i], &sid);
    const auto it = in.snapshots.find(sid);
    if (it == in.snapshots.end()) throw DataError("row for undeclared switch '" + sid + "'");
    it->second.rows.push_back(std::move(row));
  }
  return in;
}

}  // namespace iiotsec::dn
