// Acceptance suite: one PASS/FAIL/SKIP line per criterion, nonzero exit on
// any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "iiotsec/attack/attack.hpp"
#include "iiotsec/cli/commands.hpp"
#include "iiotsec/cli/config.hpp"
#include "iiotsec/common/rng.hpp"
#include "iiotsec/dn/detection_node.hpp"
#include "iiotsec/ledger/chain.hpp"
#include "iiotsec/nn/layers.hpp"
#include "iiotsec/nn/metrics.hpp"
#include "iiotsec/sdn/simulation.hpp"
#include "nn_oracles.hpp"
#include "sim_support.hpp"
#include "test_support.hpp"

using namespace iiotsec;

namespace {

enum class Status { Pass, Fail, Skip };

struct Result {
  Status status = Status::Pass;
  std::string detail;
};

Result pass(std::string d) { return {Status::Pass, std::move(d)}; }
Result fail(std::string d) { return {Status::Fail, std::move(d)}; }

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// 1. Layer forward passes against the brute-force oracle.
Result criterion1() {
  Stopwatch clock;
  Rng rng(101);
  double worst = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t c = 1 + rng.below(4), len = 2 + rng.below(31), f = 1 + rng.below(4);
    const std::size_t k = 1 + rng.below(std::min<std::size_t>(len, 5));
    const auto in = oracle::random_tensor(rng, {c, len});
    const auto w = oracle::random_tensor(rng, {f, c, k});
    const auto b = oracle::random_tensor(rng, {f});
    auto track = [&](const std::vector<std::vector<double>>& got, const std::vector<std::vector<double>>& want) {
      if (got.size() != want.size()) worst = INFINITY;
      for (std::size_t i = 0; i < got.size() && i < want.size(); ++i) {
        if (got[i].size() != want[i].size()) worst = INFINITY;
        for (std::size_t j = 0; j < got[i].size() && j < want[i].size(); ++j)
          worst = std::max(worst, std::abs(got[i][j] - want[i][j]));
      }
    };
    track(oracle::rows(nn::conv1d_forward(in, w, b)), oracle::conv1d(oracle::rows(in), oracle::cube(w), b.data()));
    const std::size_t p = 1 + rng.below(std::min<std::size_t>(len, 4));
    track(oracle::rows(nn::maxpool1d_forward(in, p).output), oracle::maxpool(oracle::rows(in), p));
    track(oracle::rows(nn::avgpool1d_forward(in, p)), oracle::avgpool(oracle::rows(in), p));
    const std::size_t n = 1 + rng.below(32), o = 1 + rng.below(8);
    const auto x = oracle::random_tensor(rng, {n});
    const auto dw = oracle::random_tensor(rng, {o, n});
    const auto db = oracle::random_tensor(rng, {o});
    track({nn::dense_forward(x, dw, db).data()}, {oracle::dense(x.data(), oracle::rows(dw), db.data())});
  }
  const double t = clock.seconds();
  const std::string d = "200 shapes, max abs error " + fmt("%.3g", worst) + ", " + fmt("%.2f", t) + " s";
  return worst <= 1e-12 && t < 10.0 ? pass(d) : fail(d);
}

// 2. Backprop against central differences.
Result criterion2() {
  Stopwatch clock;
  Rng rng(202);
  double worst = 0.0;
  std::size_t params = 0;
  for (int rep = 0; rep < 100; ++rep) {
    nn::ModelConfig c;
    for (;;) {
      c.input_length = 6 + rng.below(15);
      c.kernel_size = 1 + rng.below(3);
      c.pool_size = 1 + rng.below(2);
      c.conv1_filters = 1 + rng.below(3);
      c.conv2_filters = 1 + rng.below(3);
      c.fc1_units = 1 + rng.below(5);
      const std::size_t heads[] = {1, 3, 4};
      c.output_units = heads[rng.below(3)];
      c.seed = rng.below(1000);
      try {
        c.validate();
        break;
      } catch (const ConfigError&) {
      }
    }
    auto model = nn::CnnModel::initialize(c);
    for (auto& t : model.parameters())
      for (auto& v : t.values()) v = rng.uniform(-0.7, 0.7);
    std::vector<double> x(c.input_length);
    for (auto& v : x) v = rng.uniform01();
    const auto r = oracle::finite_difference_check(model, x, rng.below(c.num_classes()));
    worst = std::max(worst, r.max_rel_error);
    params += r.checked;
  }
  const double t = clock.seconds();
  const std::string d = "100 configs, " + std::to_string(params) + " parameters, max rel error " +
                        fmt("%.3g", worst) + ", " + fmt("%.2f", t) + " s";
  return worst <= 1e-4 && t < 60.0 ? pass(d) : fail(d);
}

// 3. Accuracy on the real dataset, if supplied.
Result criterion3() {
  const char* path = std::getenv("IIOTSEC_DATASET");
  if (!path || !*path) return {Status::Skip, "IIOTSEC_DATASET not set; real dataset absent"};
  Stopwatch clock;
  testing::TempDir dir("accept-real");
  auto cfg = cli::default_config();
  cfg.synthetic.reset();
  cfg.dataset_path = path;
  cfg.seed = 1;
  if (const char* s = std::getenv("IIOTSEC_SEED"); s && *s) cfg.seed = std::stoull(s);
  cfg.out_dir = dir.path();
  const auto table = cli::cmd_compare(cfg);
  std::map<std::string, report::ComparisonRow> rows;
  for (const auto& r : table.rows) rows[r.algorithm] = r;
  const double cnn_b = rows["1D-CNN"].binary_accuracy.value_or(0) * 100;
  const double cnn_m = rows["1D-CNN"].multiclass_accuracy.value_or(0) * 100;
  const double dt = rows["DT"].multiclass_accuracy.value_or(0) * 100;
  const double knn = rows["RSL-KNN (K=5)"].multiclass_accuracy.value_or(0) * 100;
  const double t = clock.seconds();
  const bool ok = cnn_b >= 92.75 && cnn_m >= 92.65 && std::abs(dt - 92.3) <= 3.0 && std::abs(knn - 91.9) <= 3.0 &&
                  t < 900.0;
  const std::string d = "CNN " + fmt("%.2f", cnn_b) + "/" + fmt("%.2f", cnn_m) + ", DT " + fmt("%.2f", dt) +
                        ", RSL-KNN(5) " + fmt("%.2f", knn) + ", " + fmt("%.1f", t) + " s";
  return ok ? pass(d) : fail(d);
}

// 4. Metrics against counts-based formulas on fixed matrices.
struct Expected {
  std::vector<double> precision, recall, f1;
};

Expected expected_metrics(const nn::ConfusionMatrix& m) {
  Expected e;
  const std::size_t n = m.num_classes();
  for (std::size_t c = 0; c < n; ++c) {
    std::uint64_t tp = m.at(c, c), fp = 0, fn = 0;
    for (std::size_t k = 0; k < n; ++k)
      if (k != c) {
        fp += m.at(k, c);
        fn += m.at(c, k);
      }
    e.precision.push_back(tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp));
    e.recall.push_back(tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn));
    e.f1.push_back(tp == 0 ? 0.0 : 2.0 * tp / static_cast<double>(2 * tp + fp + fn));
  }
  return e;
}

Result criterion4() {
  struct Case {
    nn::ConfusionMatrix m;
    std::optional<Expected> literal;
  };
  std::vector<Case> cases;
  cases.push_back({nn::ConfusionMatrix(2, {5, 0, 0, 5}), Expected{{1, 1}, {1, 1}, {1, 1}}});
  cases.push_back({nn::ConfusionMatrix(2, {10, 2, 2, 8}), Expected{{10.0 / 12, 0.8}, {10.0 / 12, 0.8}, {10.0 / 12, 0.8}}});
  cases.push_back({nn::ConfusionMatrix(2, {0, 4, 0, 6}), Expected{{0, 0.6}, {0, 1}, {0, 0.75}}});
  cases.push_back({nn::ConfusionMatrix(3, {3, 0, 0, 1, 0, 0, 0, 0, 0}), Expected{{0.75, 0, 0}, {1, 0, 0}, {6.0 / 7, 0, 0}}});
  cases.push_back({nn::ConfusionMatrix(3, {5, 1, 0, 2, 3, 1, 0, 0, 4}),
                   Expected{{5.0 / 7, 0.75, 0.8}, {5.0 / 6, 0.5, 1}, {10.0 / 13, 0.6, 8.0 / 9}}});
  cases.push_back({nn::ConfusionMatrix(2, {0, 0, 0, 0}), Expected{{0, 0}, {0, 0}, {0, 0}}});
  Rng rng(404);
  while (cases.size() < 20) {
    const std::size_t n = 2 + rng.below(3);
    nn::ConfusionMatrix m(n);
    const std::size_t empty_class = rng.below(n + 1);  // n means none
    for (std::size_t t = 0; t < n; ++t)
      for (std::size_t p = 0; p < n; ++p)
        if (t != empty_class && p != empty_class) m.add(t, p, rng.below(50));
    cases.push_back({m, std::nullopt});
  }
  std::size_t bad = 0;
  double worst_f1 = 0.0;
  for (const auto& c : cases) {
    const auto want = expected_metrics(c.m);
    const auto got = nn::compute_metrics(c.m);
    for (std::size_t k = 0; k < c.m.num_classes(); ++k) {
      // Precision and recall are single divisions and must match bit for bit.
      if (got.per_class[k].precision != want.precision[k] || got.per_class[k].recall != want.recall[k]) ++bad;
      const double scale = std::max(1.0, std::abs(want.f1[k]));
      worst_f1 = std::max(worst_f1, std::abs(got.per_class[k].f1 - want.f1[k]) / scale);
      if (c.literal) {
        const auto& l = *c.literal;
        if (std::abs(l.precision[k] - want.precision[k]) > 1e-15 || std::abs(l.recall[k] - want.recall[k]) > 1e-15 ||
            std::abs(l.f1[k] - want.f1[k]) > 1e-15)
          ++bad;
      }
    }
  }
  const std::string d = "20 matrices, " + std::to_string(bad) + " mismatches, max F1 deviation " + fmt("%.3g", worst_f1);
  return bad == 0 && worst_f1 <= 4e-16 ? pass(d) : fail(d);
}

// 5. Single-byte mutations of a persisted 20-block chain.
Result criterion5() {
  Stopwatch clock;
  Rng rng(505);
  ledger::Chain chain;
  while (chain.size() < 20) {
    std::vector<ledger::FlowRuleRecord> records;
    for (std::size_t i = 0, n = 1 + rng.below(3); i < n; ++i) {
      flow::FlowRule r;
      r.rule_id = chain.size() * 10 + i;
      r.match.src = "h" + std::to_string(rng.below(5));
      r.match.dst = "h" + std::to_string(rng.below(5));
      r.match.dst_port = static_cast<int>(rng.below(65536));
      r.action = flow::Action::forward(1 + static_cast<int>(rng.below(4)));
      r.issued_at = static_cast<std::int64_t>(chain.size());
      records.push_back({r, "s" + std::to_string(1 + rng.below(3))});
    }
    ledger::append_block(chain, records, ledger::NodeRole::Generator, static_cast<std::int64_t>(chain.size()));
  }
  std::string text;
  for (const auto& b : chain.blocks()) text += ledger::block_to_line(b) + "\n";
  const auto clean = ledger::parse_chain_text(text);
  const bool clean_ok = clean.status.valid() && ledger::validate_chain(clean.chain).valid() &&
                        clean.chain.blocks() == chain.blocks();
  std::size_t detected = 0;
  for (int i = 0; i < 100; ++i) {
    std::string t = text;
    std::size_t pos;
    do pos = rng.below(t.size());
    while (t[pos] == '\n');
    char now = static_cast<char>(rng.below(256));
    if (now == t[pos]) now = static_cast<char>(now ^ 0x20);
    t[pos] = now;
    const auto r = ledger::parse_chain_text(t);
    if (!r.status.valid()) ++detected;
  }
  const double s = clock.seconds();
  const std::string d = std::to_string(detected) + "/100 mutations detected, clean chain " +
                        (clean_ok ? "valid" : "INVALID") + ", " + fmt("%.2f", s) + " s";
  return detected == 100 && clean_ok && s < 5.0 ? pass(d) : fail(d);
}

// 6. Randomized DN detection scenarios.
enum class AttackKind { None, Injection, Deletion, Modification };

struct RandomNet {
  sdn::TopologySpec spec;
  std::vector<std::string> hosts;
};

RandomNet random_network(Rng& rng) {
  RandomNet n;
  const std::size_t switches = 2 + rng.below(3);
  for (std::size_t s = 1; s <= switches; ++s) n.spec.switches.push_back("s" + std::to_string(s));
  const std::size_t hosts = 3 + rng.below(3);
  for (std::size_t h = 0; h < hosts; ++h) {
    const std::string id = "h" + std::to_string(h);
    n.hosts.push_back(id);
    n.spec.hosts.push_back(id);
    n.spec.links.push_back({id, n.spec.switches[rng.below(switches)]});
  }
  for (std::size_t s = 1; s < switches; ++s) n.spec.links.push_back({n.spec.switches[s - 1], n.spec.switches[s]});
  return n;
}

sdn::Packet random_packet(Rng& rng, const std::vector<std::string>& hosts, bool malicious) {
  const std::string src = hosts[rng.below(hosts.size())];
  std::string dst;
  do dst = hosts[rng.below(hosts.size())];
  while (dst == src);
  const int ports[] = {502, 503, 80, 20000};
  auto p = testing::packet(src, dst, malicious, ports[rng.below(4)]);
  p.header.proto = rng.below(4) == 0 ? flow::Protocol::Udp : flow::Protocol::Tcp;
  return p;
}

std::string random_value(Rng& rng, flow::RuleField f, const std::vector<std::string>& hosts) {
  switch (f) {
    case flow::RuleField::Src:
    case flow::RuleField::Dst:
      return rng.below(5) == 0 ? "*" : hosts[rng.below(hosts.size())];
    case flow::RuleField::Proto: {
      const char* p[] = {"tcp", "udp", "icmp", "*"};
      return p[rng.below(4)];
    }
    case flow::RuleField::DstPort:
      return rng.below(5) == 0 ? "*" : std::to_string(rng.below(65536));
    case flow::RuleField::Action:
      return rng.below(4) == 0 ? "drop" : "forward:" + std::to_string(1 + rng.below(4));
  }
  return "*";
}

// Runs one scenario and returns the verdicts (pre-attack audit first).
std::vector<dn::IntegrityVerdict> run_detection_scenario(std::uint64_t seed, AttackKind kind, std::string* attacked) {
  Rng rng(seed);
  const auto net = random_network(rng);
  auto sim = testing::marker_sim(net.spec);
  std::int64_t tick = 1;
  std::vector<dn::IntegrityVerdict> verdicts;
  auto traffic = [&](std::size_t n, bool allow_malicious) {
    for (std::size_t i = 0; i < n; ++i) {
      sim->send_packet(random_packet(rng, net.hosts, allow_malicious && rng.below(6) == 0), tick);
      tick += static_cast<std::int64_t>(rng.below(3));
    }
  };
  // Clean runs also carry malicious traffic so controller block rules are present.
  traffic(2 + rng.below(8), kind == AttackKind::None);
  auto audit = [&] {
    auto v = dn::audit(dn::collect(*sim, sim->chain(), tick));
    dn::alert_controller(v, sim->trace());
    verdicts.push_back(std::move(v));
  };
  audit();
  ++tick;
  if (kind == AttackKind::None) {
    traffic(rng.below(8), true);
    audit();
    return verdicts;
  }

  std::vector<std::string> with_rules;
  for (const auto& sw : net.spec.switches)
    if (!sim->network().at(sw).table().empty()) with_rules.push_back(sw);
  const std::string sw = kind == AttackKind::Injection ? net.spec.switches[rng.below(net.spec.switches.size())]
                                                       : with_rules[rng.below(with_rules.size())];
  *attacked = sw;
  const auto& table = sim->network().at(sw).table();
  if (kind == AttackKind::Injection) {
    flow::FlowRule r;
    r.rule_id = 100000 + rng.below(100000);
    r.match.src = net.hosts[rng.below(net.hosts.size())];
    if (rng.below(2)) r.match.dst = net.hosts[rng.below(net.hosts.size())];
    if (rng.below(2)) r.match.dst_port = 502;
    r.action = flow::Action::forward(1 + static_cast<int>(rng.below(3)));
    r.issued_at = tick;
    const auto pos = rng.below(2) ? sdn::InstallPosition::Front : sdn::InstallPosition::Back;
    attack::mitm_tamper(*sim, attack::RuleInject{sw, r, pos}, tick);
  } else if (kind == AttackKind::Deletion) {
    attack::mitm_tamper(*sim, attack::RuleDelete{sw, table[rng.below(table.size())].rule.rule_id}, tick);
  } else {
    const auto& target = table[rng.below(table.size())].rule;
    const flow::RuleField fields[] = {flow::RuleField::Src, flow::RuleField::Dst, flow::RuleField::Proto,
                                      flow::RuleField::DstPort, flow::RuleField::Action};
    const auto field = fields[rng.below(5)];
    std::string value;
    do value = random_value(rng, field, net.hosts);
    while (value == flow::field_value(target, field));
    attack::mitm_tamper(*sim, attack::RuleModify{sw, target.rule_id, field, value}, tick);
  }
  tick += static_cast<std::int64_t>(rng.below(5));
  // Benign traffic after the attack: misses may publish and install new rules.
  traffic(rng.below(4), false);
  audit();
  return verdicts;
}

Result criterion6() {
  Stopwatch clock;
  std::map<AttackKind, std::size_t> hits;
  std::size_t false_alarms = 0, clean_verdicts = 0, misplaced = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    for (AttackKind kind : {AttackKind::None, AttackKind::Injection, AttackKind::Deletion, AttackKind::Modification}) {
      std::string attacked;
      const auto v = run_detection_scenario(i * 7 + static_cast<std::uint64_t>(kind) * 100000, kind, &attacked);
      // Every audit before an attack, and every clean audit, must be safe.
      for (std::size_t k = 0; k + (kind == AttackKind::None ? 0 : 1) < v.size(); ++k) {
        ++clean_verdicts;
        if (!v[k].safe()) ++false_alarms;
      }
      if (kind == AttackKind::None) continue;
      const auto want = kind == AttackKind::Modification ? dn::VerdictKind::Modification : dn::VerdictKind::MitmInjection;
      if (v.back().kind() == want) ++hits[kind];
      bool located = false;
      for (const auto& f : v.back().findings)
        std::visit([&](const auto& x) { located = located || x.switch_id == attacked; }, f);
      if (!located) ++misplaced;
    }
  }
  const double t = clock.seconds();
  const std::string d = "injection " + std::to_string(hits[AttackKind::Injection]) + "/100, deletion " +
                        std::to_string(hits[AttackKind::Deletion]) + "/100, modification " +
                        std::to_string(hits[AttackKind::Modification]) + "/100, " + std::to_string(false_alarms) +
                        " non-safe of " + std::to_string(clean_verdicts) + " clean audits, " +
                        std::to_string(misplaced) + " mislocated, " + fmt("%.2f", t) + " s";
  const bool ok = hits[AttackKind::Injection] == 100 && hits[AttackKind::Deletion] == 100 &&
                  hits[AttackKind::Modification] == 100 && false_alarms == 0 && misplaced == 0 && t < 60.0;
  return ok ? pass(d) : fail(d);
}

// 7. Command injection end to end with a trained CNN.
Result criterion7() {
  testing::TempDir dir("accept-ci");
  auto cfg = cli::default_config();
  cfg.seed = 31;
  cfg.out_dir = dir.path();
  const auto trained = cli::cmd_train(cfg);
  const auto data = cli::prepare_data(cfg);
  auto classifier = std::make_shared<sdn::CnnPayloadClassifier>(trained.artifact);

  std::optional<std::vector<double>> malicious, benign;
  for (const auto& r : data.test) {
    const std::vector<double> raw(r.features.begin(), r.features.end());
    const auto v = classifier->classify(raw);
    if (!malicious && dataset::regroup_label(r.label8) == dataset::ClassLabel4::Injection && v.malicious) malicious = raw;
    if (!benign && r.label8 == dataset::ClassLabel8::Normal && !v.malicious) benign = raw;
  }
  if (!malicious || !benign) return fail("no correctly classified held-out injection/normal sample");

  sdn::Simulation sim(sdn::TopologySpec::default_topology());
  sim.controller().ids().load(classifier);
  auto pkt = [&](const std::string& src, const std::string& dst, int port, const std::vector<double>& payload) {
    return sdn::Packet{{src, dst, 40000, port, flow::Protocol::Tcp}, payload};
  };
  sim.send_packet(pkt("client", "server", 502, *benign), 1);
  const auto first = sim.send_packet(pkt("attacker", "server", 502, *malicious), 2);

  bool packet_in = false, verdict_one = false, block_event = false;
  for (const auto& e : sim.trace().events()) {
    if (e.tick != 2) continue;
    if (e.kind == sdn::EventKind::PacketIn && e.details["header"]["src"] == "attacker") packet_in = true;
    if (e.kind == sdn::EventKind::IdsVerdict && e.details["src"] == "attacker" && e.details["value"] == 1)
      verdict_one = true;
    if (e.kind == sdn::EventKind::Block && e.details["host"] == "attacker") block_event = true;
  }
  const auto& ingress = sim.network().at(sim.topology().attachment("attacker").switch_id).table();
  const bool rule_installed = !ingress.empty() && ingress.front().rule.action == flow::Action::drop() &&
                              ingress.front().rule.match.src == std::optional<std::string>("attacker");

  Rng rng(7);
  const std::vector<std::string> targets{"server", "client"};
  for (std::int64_t tick = 3; tick < 23; ++tick) {
    const auto& payload = rng.below(2) ? *malicious : *benign;
    sim.send_packet(pkt("attacker", targets[rng.below(2)], 500 + static_cast<int>(rng.below(10)), payload), tick);
  }
  std::size_t leaked = 0;
  for (const auto& e : sim.trace().events())
    if (e.tick >= 2 && e.kind == sdn::EventKind::Delivery && e.details["src"] == "attacker") ++leaked;
  const bool client_ok = sim.send_packet(pkt("client", "server", 502, *benign), 23).kind ==
                         sdn::PacketOutcome::Kind::Delivered;

  const bool ok = packet_in && verdict_one && block_event && rule_installed &&
                  first.kind == sdn::PacketOutcome::Kind::Dropped && leaked == 0 && client_ok;
  std::ostringstream d;
  d << "packet-in " << packet_in << ", IDS=1 " << verdict_one << ", block rule " << (block_event && rule_installed)
    << ", attacker deliveries after block " << leaked << ", client still served " << client_ok;
  return ok ? pass(d.str()) : fail(d.str());
}

// 8. Byte-identical artifacts across consecutive runs.
std::map<std::string, std::string> snapshot(const std::filesystem::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(root))
    if (e.is_regular_file()) files[std::filesystem::relative(e.path(), root).string()] = testing::read_file(e.path());
  return files;
}

Result criterion8() {
  testing::TempDir dir("accept-det");
  auto run = [&] {
    std::filesystem::remove_all(dir / "run");
    auto cfg = cli::default_config();
    cfg.seed = 2024;
    cfg.out_dir = dir / "run";
    for (auto mode : {cli::Mode::Binary, cli::Mode::Multiclass}) {
      cfg.mode = mode;
      cli::cmd_train(cfg);
    }
    cfg.mode = cli::Mode::Binary;
    for (const auto* s : {"normal", "command-injection", "rule-injection", "rule-modification"}) {
      cfg.scenario = s;
      cli::cmd_simulate(cfg);
    }
    return snapshot(dir / "run");
  };
  const auto a = run();
  const auto b = run();
  std::size_t differing = 0;
  for (const auto& [name, bytes] : a) {
    const auto it = b.find(name);
    if (it == b.end() || it->second != bytes) ++differing;
  }
  if (a.size() != b.size()) ++differing;
  const std::string d = std::to_string(a.size()) + " files compared, " + std::to_string(differing) + " differ";
  return differing == 0 && !a.empty() ? pass(d) : fail(d);
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
      {"layer forward passes match the brute-force oracle", criterion1},
      {"backprop matches central finite differences", criterion2},
      {"accuracy on the real dataset", criterion3},
      {"metrics match hand-computed values", criterion4},
      {"ledger detects single-byte tampering", criterion5},
      {"detection node classifies rule attacks", criterion6},
      {"command injection is blocked end to end", criterion7},
      {"training and simulation are deterministic", criterion8},
  };
  bool failed = false;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Result r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = fail(std::string("exception: ") + e.what());
    }
    const char* tag = r.status == Status::Pass ? "PASS" : r.status == Status::Fail ? "FAIL" : "SKIP";
    failed = failed || r.status == Status::Fail;
    std::printf("%s criterion %zu: %s (%s)\n", tag, i + 1, criteria[i].first.c_str(), r.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
