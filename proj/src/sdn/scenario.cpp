#include "iiotsec/sdn/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "iiotsec/common/error.hpp"

namespace iiotsec::scenario {

std::string_view action_name(ActionKind kind) {
  switch (kind) {
    case ActionKind::SendPacket: return "send_packet";
    case ActionKind::TamperRule: return "tamper_rule";
    case ActionKind::InjectRule: return "inject_rule";
    case ActionKind::DeleteRule: return "delete_rule";
    case ActionKind::DnAudit: return "dn_audit";
  }
  return "?";
}

namespace {

std::optional<ActionKind> action_from_name(std::string_view name) {
  for (auto k : {ActionKind::SendPacket, ActionKind::TamperRule, ActionKind::InjectRule, ActionKind::DeleteRule,
                 ActionKind::DnAudit})
    if (action_name(k) == name) return k;
  return std::nullopt;
}

Step parse_step(const nlohmann::json& s, std::size_t i) {
  const std::string where = "step " + std::to_string(i);
  if (!s.is_object()) throw ConfigError(where + ": must be an object");
  Step step;
  try {
    step.tick = s.at("tick").get<std::int64_t>();
    const auto name = s.at("action").get<std::string>();
    const auto kind = action_from_name(name);
    if (!kind) throw ConfigError(where + ": unknown action '" + name + "'");
    step.action = *kind;
    step.actor = s.value("actor", std::string());
    step.params = s.value("params", nlohmann::json::object());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
  if (step.tick < 0) throw ConfigError(where + ": negative tick");
  if (!step.params.is_object()) throw ConfigError(where + ": params must be an object");
  return step;
}

}  // namespace

Scenario parse_scenario(const nlohmann::json& doc, std::string name) {
  Scenario sc;
  sc.name = std::move(name);
  const nlohmann::json* steps = &doc;
  if (doc.is_object()) {
    if (doc.contains("name")) sc.name = doc["name"].get<std::string>();
    if (doc.contains("topology")) sc.topology = sdn::TopologySpec::from_json(doc["topology"]);
    if (!doc.contains("steps")) throw ConfigError("scenario object needs a 'steps' list");
    steps = &doc["steps"];
  }
  if (!steps->is_array()) throw ConfigError("scenario steps must be a list");
  for (std::size_t i = 0; i < steps->size(); ++i) sc.steps.push_back(parse_step((*steps)[i], i));
  std::stable_sort(sc.steps.begin(), sc.steps.end(), [](const Step& a, const Step& b) { return a.tick < b.tick; });
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("scenario " + path.string() + ": " + e.what());
  }
  return parse_scenario(doc, path.stem().string());
}

std::filesystem::path audit_ledger_file(const std::filesystem::path& dir, std::size_t n) {
  return dir / ("audit-" + std::to_string(n) + "-ledger.jsonl");
}

std::filesystem::path audit_switch_file(const std::filesystem::path& dir, std::size_t n) {
  return dir / ("audit-" + std::to_string(n) + "-switches.jsonl");
}

namespace {

std::string get_string(const nlohmann::json& p, const char* key, const std::string& where) {
  if (!p.contains(key) || !p[key].is_string()) throw ConfigError(where + ": param '" + key + "' must be a string");
  return p[key].get<std::string>();
}

std::uint64_t get_rule_id(const nlohmann::json& p, const std::string& where) {
  const bool ok = p.contains("rule_id") && (p["rule_id"].is_number_unsigned() ||
                                            (p["rule_id"].is_number_integer() && p["rule_id"].get<std::int64_t>() >= 0));
  if (!ok)
    throw ConfigError(where + ": param 'rule_id' must be a non-negative integer");
  return p["rule_id"].get<std::uint64_t>();
}

sdn::Payload make_payload(const nlohmann::json& spec, const Environment& env, const std::string& where) {
  if (!spec.is_object()) throw ConfigError(where + ": payload must be an object");
  if (spec.contains("raw")) {
    try {
      return spec["raw"].get<std::vector<double>>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(where + ": payload.raw must be a list of numbers");
    }
  }
  if (spec.contains("opaque")) return sdn::OpaquePayload{get_string(spec, "opaque", where)};
  if (spec.contains("class")) {
    const auto cls = dataset::label4_from_name(get_string(spec, "class", where));
    if (!cls) throw ConfigError(where + ": unknown payload class");
    if (!env.payloads) throw ConfigError(where + ": payload by class needs a payload pool");
    if (*cls == dataset::ClassLabel4::Normal) {
      const auto f = env.payloads->draw(*cls);
      return std::vector<double>(f.begin(), f.end());
    }
    return attack::craft_malicious_payload(*env.payloads, *cls);
  }
  throw ConfigError(where + ": payload needs 'class', 'raw' or 'opaque'");
}

struct Runner {
  sdn::Simulation& sim;
  const Environment& env;
  Outcome out;
  std::size_t audits = 0;

  void fail(const std::string& msg) { out.failed_expectations.push_back(msg); }

  void send(const Step& st, const std::string& where) {
    const auto& p = st.params;
    flow::PacketHeader h;
    h.src = p.contains("src") ? get_string(p, "src", where) : st.actor;
    h.dst = p.contains("dst") ? get_string(p, "dst", where) : std::string(sdn::kServerHost);
    h.src_port = p.value("src_port", 40000);
    h.dst_port = p.value("dst_port", 502);
    const auto proto = flow::protocol_from_name(p.value("proto", std::string("tcp")));
    if (!proto) throw ConfigError(where + ": unknown protocol");
    h.proto = *proto;
    const int count = p.value("count", 1);
    if (count < 1) throw ConfigError(where + ": count must be positive");
    const nlohmann::json payload_spec = p.value("payload", nlohmann::json{{"class", "normal"}});
    const nlohmann::json expect = p.value("expect", nlohmann::json::object());
    for (int i = 0; i < count; ++i) {
      sdn::Packet pkt{h, make_payload(payload_spec, env, where)};
      auto res = sim.send_packet(pkt, st.tick);
      const bool delivered = res.kind == sdn::PacketOutcome::Kind::Delivered;
      if (expect.contains("delivered") && expect["delivered"].get<bool>() != delivered)
        fail(where + ": expected delivered=" + (delivered ? "false" : "true"));
      if (expect.contains("delivered_to") && (!delivered || res.delivered_to != expect["delivered_to"].get<std::string>()))
        fail(where + ": expected delivery to " + expect["delivered_to"].get<std::string>());
      if (expect.contains("decision")) {
        const auto want = expect["decision"].get<std::string>();
        const bool seen = std::any_of(res.decisions.begin(), res.decisions.end(),
                                      [&](const sdn::ControllerDecision& d) { return sdn::decision_name(d.kind) == want; });
        if (!seen) fail(where + ": expected controller decision " + want);
      }
      out.packets.push_back(std::move(res));
    }
    if (expect.contains("blocked") &&
        expect["blocked"].get<bool>() != sim.controller().blocklist().contains(h.src))
      fail(where + ": blocklist state of " + h.src + " differs from expectation");
  }

  void tamper(const Step& st, const std::string& where) {
    const auto& p = st.params;
    attack::AttackAction action;
    const auto sw = get_string(p, "switch", where);
    if (st.action == ActionKind::TamperRule) {
      const auto field = flow::field_from_name(get_string(p, "field", where));
      if (!field) throw ConfigError(where + ": unknown rule field");
      action = attack::RuleModify{sw, get_rule_id(p, where), *field, get_string(p, "value", where)};
    } else if (st.action == ActionKind::InjectRule) {
      if (!p.contains("rule")) throw ConfigError(where + ": inject_rule needs 'rule'");
      auto rule = flow::rule_from_script(p["rule"]);
      if (!p["rule"].contains("issued_at")) rule.issued_at = st.tick;
      const auto pos = p.value("position", std::string("front"));
      if (pos != "front" && pos != "back") throw ConfigError(where + ": position must be front or back");
      action = attack::RuleInject{sw, rule, pos == "front" ? sdn::InstallPosition::Front : sdn::InstallPosition::Back};
    } else {
      action = attack::RuleDelete{sw, get_rule_id(p, where)};
    }
    attack::mitm_tamper(sim, action, st.tick);
  }

  void dn_audit(const Step& st, const std::string& where) {
    dn::AuditInput input = dn::collect(sim, sim.chain(), st.tick);
    const std::size_t n = audits++;
    if (env.audit_dir) {
      const auto a = audit_ledger_file(*env.audit_dir, n);
      const auto b = audit_switch_file(*env.audit_dir, n);
      dn::write_audit_files(input, a, b);
      input = dn::read_audit_files(a, b);
    }
    std::size_t rows = 0;
    for (const auto& [id, snap] : input.snapshots) rows += snap.rows.size();
    sim.trace().record(st.tick, sdn::EventKind::Audit,
                       {{"audit", n}, {"ledger_rows", input.ledger_rules.size()}, {"switch_rows", rows}});
    dn::IntegrityVerdict verdict = dn::audit(input);
    dn::alert_controller(verdict, sim.trace());
    if (env.audit_dir) {
      std::ofstream alerts(*env.audit_dir / "alerts.jsonl", std::ios::binary | std::ios::app);
      if (!alerts) throw DataError("cannot write alerts file");
      nlohmann::json line = dn::verdict_to_json(verdict);
      line["audit"] = n;
      alerts << line.dump() << '\n';
    }
    if (st.params.value("remediate", false) && !verdict.safe()) {
      std::vector<std::string> switches;
      for (const auto& f : verdict.findings) {
        const auto& id = std::visit([](const auto& x) -> const std::string& { return x.switch_id; }, f);
        if (std::find(switches.begin(), switches.end(), id) == switches.end()) switches.push_back(id);
      }
      for (const auto& id : switches) sim.controller().remediate(sim.network(), id, st.tick, sim.trace());
    }
    if (st.params.contains("expect")) {
      const auto want = st.params["expect"].get<std::string>();
      if (dn::verdict_kind_name(verdict.kind()) != want)
        fail(where + ": expected verdict " + want + ", got " + std::string(dn::verdict_kind_name(verdict.kind())));
    }
    out.verdicts.push_back(std::move(verdict));
  }
};

}  // namespace

Outcome run_scenario(sdn::Simulation& sim, const Scenario& script, const Environment& env) {
  if (env.audit_dir) {
    std::filesystem::create_directories(*env.audit_dir);
    std::ofstream(*env.audit_dir / "alerts.jsonl", std::ios::binary | std::ios::trunc);
  }
  Runner r{sim, env, {}, 0};
  for (std::size_t i = 0; i < script.steps.size(); ++i) {
    const Step& st = script.steps[i];
    const std::string where = script.name + " step " + std::to_string(i) + " (" +
                              std::string(action_name(st.action)) + " @" + std::to_string(st.tick) + ")";
    try {
      switch (st.action) {
        case ActionKind::SendPacket: r.send(st, where); break;
        case ActionKind::TamperRule:
        case ActionKind::InjectRule:
        case ActionKind::DeleteRule: r.tamper(st, where); break;
        case ActionKind::DnAudit: r.dn_audit(st, where); break;
      }
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  return std::move(r.out);
}

}  // namespace iiotsec::scenario
