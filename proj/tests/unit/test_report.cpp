#include "doctest.h"
#include "iiotsec/common/error.hpp"
#include "iiotsec/common/rng.hpp"
#include "iiotsec/report/report.hpp"

#include <sstream>

using namespace iiotsec;
using namespace iiotsec::report;

namespace {

const std::vector<std::string> kThree{"a", "b", "c"};

nn::ConfusionMatrix known_matrix() { return nn::ConfusionMatrix(3, {5, 1, 0, 2, 3, 1, 0, 0, 4}); }

std::vector<std::vector<std::string>> cells(const std::string& csv) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    out.emplace_back();
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) out.back().push_back(cell);
  }
  return out;
}

}  // namespace

TEST_CASE("percent formatting rounds half up to two decimals") {
  CHECK(format_percent(0.94745) == "94.75");
  CHECK(format_percent(0.5) == "50.00");
  CHECK(format_percent(1.0) == "100.00");
  CHECK(format_percent(0.0) == "0.00");
  CHECK(format_percent(0.123449) == "12.34");
  CHECK(format_percent(0.99995) == "100.00");
  CHECK(format_percent(2.0 / 3.0) == "66.67");
}

TEST_CASE("format_double round-trips exactly") {
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    const double v = rng.normal(0.0, 1.0) * std::pow(10.0, rng.uniform(-20.0, 20.0));
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK_THROWS_AS(parse_double("1.5x"), DataError);
  CHECK_THROWS_AS(parse_double(""), DataError);
}

TEST_CASE("metrics rows match hand-computed values") {
  const auto rows = metrics_rows(nn::compute_metrics(known_matrix()), kThree);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].precision == doctest::Approx(5.0 / 7.0).epsilon(1e-15));
  CHECK(rows[0].recall == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  CHECK(rows[0].f1 == doctest::Approx(10.0 / 13.0).epsilon(1e-15));
  CHECK(rows[1].precision == doctest::Approx(0.75));
  CHECK(rows[1].recall == doctest::Approx(0.5));
  CHECK(rows[1].f1 == doctest::Approx(0.6));
  CHECK(rows[2].f1 == doctest::Approx(8.0 / 9.0));
  CHECK(rows[3].name == "average");
  CHECK(rows[3].precision == doctest::Approx((5.0 / 7.0 + 0.75 + 0.8) / 3.0));
  CHECK(rows[3].support == 16);
  CHECK(rows[4].name == "accuracy");
  CHECK(rows[4].precision == doctest::Approx(0.75));
}

TEST_CASE("metrics csv shows percentages and parses back exactly") {
  const auto report = nn::compute_metrics(known_matrix());
  const auto csv = metrics_csv(report, kThree);
  const auto c = cells(csv);
  REQUIRE(c.size() == 6);
  CHECK(c[0] == std::vector<std::string>{"class", "precision_pct", "recall_pct", "f1_pct", "support", "precision",
                                          "recall", "f1"});
  CHECK(c[1][1] == "71.43");
  CHECK(c[1][2] == "83.33");
  CHECK(c[1][3] == "76.92");
  CHECK(c[1][4] == "6");
  CHECK(parse_metrics_csv(csv) == metrics_rows(report, kThree));
}

TEST_CASE("a perfect classifier reports 100.00 everywhere") {
  const auto csv = metrics_csv(nn::compute_metrics(nn::ConfusionMatrix(3, {4, 0, 0, 0, 7, 0, 0, 0, 9})), kThree);
  const auto c = cells(csv);
  for (std::size_t r = 1; r < c.size(); ++r)
    for (std::size_t k = 1; k <= 3; ++k) CHECK(c[r][k] == "100.00");
}

TEST_CASE("zero denominators give zero") {
  const auto rows = metrics_rows(nn::compute_metrics(nn::ConfusionMatrix(3, {3, 0, 0, 1, 0, 0, 0, 0, 0})), kThree);
  CHECK(rows[1].precision == 0.0);
  CHECK(rows[1].recall == 0.0);
  CHECK(rows[1].f1 == 0.0);
  CHECK(rows[2].precision == 0.0);
  CHECK(rows[2].support == 0);
}

TEST_CASE("confusion csv round trip") {
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 2 + rng.below(3);
    nn::ConfusionMatrix m(n);
    for (std::size_t t = 0; t < n; ++t)
      for (std::size_t p = 0; p < n; ++p) m.add(t, p, rng.below(1000));
    std::vector<std::string> names;
    for (std::size_t k = 0; k < n; ++k) names.push_back("c" + std::to_string(k));
    const auto csv = confusion_csv(m, names);
    CHECK(cells(csv)[0][0] == "truth\\predicted");
    CHECK(parse_confusion_csv(csv) == m);
  }
  CHECK_THROWS_AS(parse_confusion_csv("truth\\predicted,a,b\na,1\n"), DataError);
}

TEST_CASE("epoch csv has one row per epoch and five columns") {
  std::vector<nn::EpochTrace> trace;
  for (std::size_t e = 1; e <= 4; ++e) trace.push_back({e, 1.0 / e, 0.5, 2.0 / e, 0.25});
  const auto c = cells(epoch_csv(trace));
  REQUIRE(c.size() == 5);
  CHECK(c[0] == std::vector<std::string>{"epoch", "train_loss", "train_acc", "val_loss", "val_acc"});
  for (const auto& row : c) CHECK(row.size() == 5);
  CHECK(parse_double(c[3][1]) == 1.0 / 3.0);
}

TEST_CASE("comparison table") {
  ComparisonTable t;
  t.add({"cnn", 0.5, 0.25});
  t.add({"dt", std::nullopt, 1.0});
  CHECK_THROWS_AS(t.add({"bad", 1.5, std::nullopt}), ConfigError);
  CHECK_THROWS_AS(t.add({"bad", std::nullopt, -0.1}), ConfigError);
  const auto c = cells(comparison_csv(t));
  REQUIRE(c.size() == 3);
  CHECK(c[1][1] == "50.00");
  CHECK(c[1][2] == "25.00");
  CHECK(c[2][1].empty());
  CHECK(c[2][2] == "100.00");
  const auto j = comparison_json(t);
  CHECK(j["rows"].size() == 2);
}

TEST_CASE("scenario summary counts trace events") {
  CHECK(scenario_report_json(summarize(sdn::Trace{}))["attack_verdicts"] == 0);
  sdn::Trace trace;
  trace.record(1, sdn::EventKind::PacketSent);
  trace.record(1, sdn::EventKind::Delivery);
  trace.record(2, sdn::EventKind::PacketSent);
  trace.record(2, sdn::EventKind::Drop);
  trace.record(3, sdn::EventKind::Alert, {{"verdict", "safe"}});
  trace.record(4, sdn::EventKind::Alert, {{"verdict", "modification"}});
  const auto s = summarize(trace);
  CHECK(s.packets_sent == 2);
  CHECK(s.packets_forwarded == 1);
  CHECK(s.packets_dropped == 1);
  CHECK(s.safe_verdicts == 1);
  CHECK(s.attack_verdicts() == 1);
}
