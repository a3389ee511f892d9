#include "doctest.h"
#include "iiotsec/cli/commands.hpp"
#include "iiotsec/cli/config.hpp"
#include "iiotsec/common/error.hpp"
#include "iiotsec/report/report.hpp"
#include "test_support.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace iiotsec;
using namespace iiotsec::cli;

namespace {

RunConfig quick_config(const std::filesystem::path& out, std::uint64_t seed = 7) {
  auto c = default_config();
  c.seed = seed;
  c.out_dir = out;
  c.model.epochs = 3;
  c.threads = 2;
  return c;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

int run_tool(const std::string& args) {
  const std::string cmd = "env -u IIOTSEC_SEED -u IIOTSEC_MODE -u IIOTSEC_OUT -u IIOTSEC_SCENARIO -u IIOTSEC_CONFIG " +
                          std::string(IIOTSEC_TOOL_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct EnvGuard {
  std::vector<std::string> names;
  void set(const std::string& name, const std::string& value) {
    ::setenv(name.c_str(), value.c_str(), 1);
    names.push_back(name);
  }
  ~EnvGuard() {
    for (const auto& n : names) ::unsetenv(n.c_str());
  }
};

}  // namespace

TEST_CASE("config requires a seed and exactly one data source") {
  auto c = default_config();
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.seed = 1;
  CHECK_NOTHROW(c.validate());
  c.dataset_path = "data.csv";
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.synthetic.reset();
  CHECK_NOTHROW(c.validate());
  c.dataset_path.reset();
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("config json parsing") {
  const auto doc = nlohmann::json::parse(R"({
    "seed": 42, "mode": "multiclass", "out": "results", "data": {"path": "wustl.csv"},
    "model": {"epochs": 4}, "rsl_knn": {"k": [3]}, "decision_tree": {"max_depth": 6}
  })");
  const auto c = config_from_json(doc, "/base");
  CHECK(c.seed == 42u);
  CHECK(c.mode == Mode::Multiclass);
  CHECK(c.out_dir == std::filesystem::path("/base/results"));
  CHECK(c.dataset_path == std::filesystem::path("/base/wustl.csv"));
  CHECK_FALSE(c.synthetic);
  CHECK(c.model.epochs == 4);
  CHECK(c.model.momentum == 0.8);
  CHECK(c.knn_k == std::vector<std::size_t>{3});
  CHECK(c.decision_tree.max_depth == std::optional<std::size_t>(6));
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"sed": 1})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"mode": "ternary"})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"seed": "x"})")), ConfigError);
}

TEST_CASE("environment overrides the file and flags override both") {
  EnvGuard env;
  env.set("IIOTSEC_SEED", "5");
  env.set("IIOTSEC_MODE", "multiclass");
  auto c = config_from_json(nlohmann::json::parse(R"({"seed": 1, "out": "/o"})"));
  apply_overrides(c, overrides_from_env());
  CHECK(c.seed == 5u);
  CHECK(c.mode == Mode::Multiclass);
  CHECK(c.out_dir == std::filesystem::path("/o"));
  apply_overrides(c, {std::string("9"), std::string("binary"), std::nullopt, std::nullopt});
  CHECK(c.seed == 9u);
  CHECK(c.mode == Mode::Binary);
  CHECK_THROWS_AS(apply_overrides(c, {std::string("-3"), std::nullopt, std::nullopt, std::nullopt}), ConfigError);
}

TEST_CASE("prepare writes the splits and is reproducible") {
  testing::TempDir dir("prepare");
  const auto d1 = cmd_prepare(quick_config(dir / "a"));
  cmd_prepare(quick_config(dir / "b"));
  for (const auto* f : {"train.csv", "validation.csv", "test.csv", "normalization.json"}) {
    REQUIRE(std::filesystem::exists(dir / "a" / f));
    CHECK(testing::read_file(dir / "a" / f) == testing::read_file(dir / "b" / f));
  }
  const auto total = d1.train.size() + d1.validation.size() + d1.test.size();
  CHECK(d1.train.size() == doctest::Approx(0.70 * total).epsilon(0.01));
  auto missing = quick_config(dir / "c");
  missing.synthetic.reset();
  missing.dataset_path = dir / "nope.csv";
  CHECK_THROWS_AS(cmd_prepare(missing), DataError);
}

TEST_CASE("train writes one epoch row per epoch; eval checks the feature selection") {
  testing::TempDir dir("train");
  auto c = quick_config(dir.path());
  c.model.epochs = 1;
  const auto t = cmd_train(c);
  REQUIRE(std::filesystem::exists(t.model_file));
  const auto epochs = testing::read_file(t.epochs_file);
  CHECK(std::count(epochs.begin(), epochs.end(), '\n') == 2);
  const auto m = cmd_eval(c);
  CHECK(m.confusion.total() > 0);
  CHECK(std::filesystem::exists(dir / "metrics_binary.csv"));
  CHECK(std::filesystem::exists(dir / "confusion_binary.csv"));

  auto other = c;
  other.synthetic->constant_features = {0, 3, 6, 9, 12, 15, 18, 21, 24};
  CHECK_THROWS_AS(cmd_eval(other), DataError);
  auto wrong_head = c;
  wrong_head.mode = Mode::Multiclass;
  wrong_head.model_path = t.model_file;
  CHECK_THROWS_AS(cmd_eval(wrong_head), ConfigError);
}

TEST_CASE("bundled scenarios meet their expectations") {
  testing::TempDir dir("simulate");
  auto c = quick_config(dir.path());
  c.model.epochs = 30;
  cmd_train(c);
  for (const auto* name : {"normal", "command-injection", "rule-injection", "rule-modification"}) {
    CAPTURE(name);
    c.scenario = name;
    const auto s = cmd_simulate(c);
    for (const auto& f : s.outcome.failed_expectations) MESSAGE(f);
    CHECK(s.outcome.expectations_met());
    CHECK(std::filesystem::exists(s.dir / "trace.jsonl"));
    CHECK(std::filesystem::exists(s.dir / "ledger.jsonl"));
    CHECK(std::filesystem::exists(s.dir / "scenario_report.json"));
    const std::string n = name;
    if (n == "normal") {
      CHECK(s.summary.attack_verdicts() == 0);
      CHECK(s.summary.safe_verdicts == s.summary.audits);
      CHECK(s.summary.hosts_blocked == 0);
    } else if (n == "command-injection") {
      CHECK(s.summary.hosts_blocked == 1);
    } else if (n == "rule-injection") {
      CHECK(s.summary.mitm_injection_verdicts >= 1);
    } else {
      CHECK(s.summary.modification_verdicts >= 1);
    }
  }
  c.scenario = "no-such-scenario";
  std::ostringstream out, err;
  CHECK(run_command("simulate", c, out, err) == kExitUsage);
}

TEST_CASE("a failed expectation exits 3") {
  testing::TempDir dir("expect");
  auto c = quick_config(dir.path());
  write_text(dir / "bad.json", R"([{"tick": 1, "actor": "dn", "action": "dn_audit", "params": {"expect": "modification"}}])");
  c.scenario = (dir / "bad.json").string();
  std::ostringstream out, err;
  CHECK(run_command("simulate", c, out, err) == kExitDetection);
  CHECK(err.str().find("expectation failed") != std::string::npos);
}

TEST_CASE("tool exit codes") {
  testing::TempDir dir("tool");
  write_text(dir / "cfg.json", R"({"model": {"epochs": 1}, "threads": 2, "data": {"synthetic": {}}})");
  write_text(dir / "missing.json", R"({"seed": 1, "data": {"path": "absent.csv"}})");
  const auto cfg = (dir / "cfg.json").string();
  const auto out = (dir / "out").string();
  CHECK(run_tool("prepare --config " + cfg + " --out " + out) == 1);
  CHECK(run_tool("prepare --config " + cfg + " --seed 3 --out " + out) == 0);
  CHECK(run_tool("prepare --config " + cfg + " --seed 3 --mode ternary --out " + out) == 1);
  CHECK(run_tool("prepare --config " + (dir / "missing.json").string() + " --out " + out) == 2);
  CHECK(run_tool("frobnicate --seed 3") == 1);
  CHECK(run_tool("--seed 3 --config " + cfg + " train --out " + out) == 0);
  CHECK(std::filesystem::exists(dir / "out" / "model_binary.json"));
}
