#include <cmath>

#include "doctest.h"
#include "iiotsec/common/error.hpp"
#include "iiotsec/nn/layers.hpp"
#include "iiotsec/nn/metrics.hpp"
#include "iiotsec/nn/model.hpp"
#include "iiotsec/nn/optimizer.hpp"
#include "iiotsec/nn/serialization.hpp"
#include "iiotsec/nn/trainer.hpp"
#include "nn_oracles.hpp"
#include "test_support.hpp"

using namespace iiotsec;
using namespace iiotsec::nn;

namespace {

ModelConfig tiny_config(std::size_t outputs) {
  ModelConfig c;
  c.input_length = 10;
  c.conv1_filters = 2;
  c.conv2_filters = 3;
  c.fc1_units = 4;
  c.output_units = outputs;
  c.seed = 9;
  return c;
}

// Separable classes: class c is high on the c-th block of features.
std::vector<LabeledSample> blobs(std::size_t n, std::size_t len, std::size_t classes, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<LabeledSample> out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t label = i % classes;
    LabeledSample s{std::vector<double>(len), label};
    for (std::size_t j = 0; j < len; ++j) {
      const double centre = (j * classes / len == label) ? 0.8 : 0.2;
      s.features[j] = std::clamp(centre + rng.normal(0.0, 0.05), 0.0, 1.0);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

TEST_CASE("conv1d hand example") {
  const Tensor in({1, 4}, {1, 2, 3, 4});
  const Tensor k({1, 1, 3}, {1, 0, -1});
  const Tensor b({1}, {0});
  const auto out = conv1d_forward(in, k, b);
  REQUIRE(out.shape() == std::vector<std::size_t>{1, 2});
  CHECK(out[0] == -2.0);
  CHECK(out[1] == -2.0);
}

TEST_CASE("pooling hand examples") {
  const Tensor in({1, 4}, {1, 3, 2, 5});
  const auto mp = maxpool1d_forward(in, 2);
  CHECK(mp.output.data() == std::vector<double>{3, 5});
  CHECK(mp.argmax == std::vector<std::size_t>{1, 3});
  CHECK(avgpool1d_forward(in, 2).data() == std::vector<double>{2, 3.5});
  const Tensor odd({1, 5}, {1, 3, 2, 5, 9});
  CHECK(maxpool1d_forward(odd, 2).output.size() == 2);

  const Tensor g({1, 2}, {1, 10});
  CHECK(maxpool1d_backward(g, mp.argmax, {1, 4}).data() == std::vector<double>{0, 1, 0, 10});
  CHECK(avgpool1d_backward(g, {1, 4}, 2).data() == std::vector<double>{0.5, 0.5, 5, 5});
}

TEST_CASE("layers agree with the brute-force oracle on random shapes") {
  Rng rng(17);
  for (int rep = 0; rep < 25; ++rep) {
    const std::size_t c = 1 + rng.below(3), len = 4 + rng.below(12), f = 1 + rng.below(4), k = 1 + rng.below(3);
    const auto in = oracle::random_tensor(rng, {c, len});
    const auto w = oracle::random_tensor(rng, {f, c, k});
    const auto b = oracle::random_tensor(rng, {f});
    const auto got = oracle::rows(conv1d_forward(in, w, b));
    const auto want = oracle::conv1d(oracle::rows(in), oracle::cube(w), b.data());
    for (std::size_t i = 0; i < got.size(); ++i)
      for (std::size_t j = 0; j < got[i].size(); ++j) CHECK(std::abs(got[i][j] - want[i][j]) <= 1e-12);
  }
}

TEST_CASE("dense backward matches outer-product formula") {
  const Tensor x({2}, {1, 2});
  const Tensor w({2, 2}, {1, 2, 3, 4});
  const Tensor g({2}, {1, -1});
  const auto d = dense_backward(x, w, g);
  CHECK(d.weights.data() == std::vector<double>{1, 2, -1, -2});
  CHECK(d.bias.data() == std::vector<double>{1, -1});
  CHECK(d.input.data() == std::vector<double>{-2, -2});
}

TEST_CASE("activations and losses") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(-800.0) >= 0.0);
  CHECK(std::isfinite(sigmoid(800.0)));
  const auto s = softmax(Tensor({3}, {1000, 1000, 1000}));
  for (double v : s.values()) CHECK(v == doctest::Approx(1.0 / 3));
  CHECK(binary_crossentropy(0.0, 1.0) == doctest::Approx(-std::log(kProbabilityEpsilon)));
  CHECK(binary_crossentropy(0.5, 0.0) == doctest::Approx(std::log(2.0)));
  const std::vector<double> p{0.25, 0.75};
  CHECK(categorical_crossentropy(p, 1) == doctest::Approx(-std::log(0.75)));
  const std::vector<std::vector<double>> preds{{0.5}, {0.5}};
  const std::vector<std::size_t> targets{0, 1};
  CHECK(loss(preds, targets, LossKind::BinaryCrossEntropy) == doctest::Approx(std::log(2.0)));
  CHECK(relu_backward(Tensor({3}, {-1, 0, 2}), Tensor({3}, {5, 5, 5})).data() == std::vector<double>{0, 0, 5});
}

TEST_CASE("two momentum steps with a constant gradient") {
  // v1 = -lr g, v2 = m v1 - lr g, so w2 - w0 = -lr g (2 + m) = -lr g 2.8
  Tensor w({1}, {1.0}), g({1}, {0.5}), v({1}, {0.0});
  sgd_momentum_step(w, g, v, 0.01, 0.8);
  sgd_momentum_step(w, g, v, 0.01, 0.8);
  CHECK(w[0] == doctest::Approx(1.0 - 0.01 * 0.5 * 2.8).epsilon(1e-14));
}

TEST_CASE("model shapes follow the configuration") {
  const ModelConfig c;
  CHECK(c.conv1_length() == 16);
  CHECK(c.pool1_length() == 8);
  CHECK(c.conv2_length() == 6);
  CHECK(c.pool2_length() == 3);
  CHECK(c.flattened_size() == 96);
  ModelConfig two = c;
  two.output_units = 2;
  CHECK_THROWS_AS(two.validate(), ConfigError);
  const auto m = CnnModel::initialize(c);
  const auto p = m.predict_proba(std::vector<double>(18, 0.5));
  REQUIRE(p.size() == 1);
  CHECK(p[0] > 0.0);
  CHECK(p[0] < 1.0);
  CHECK_THROWS_AS(m.forward(std::vector<double>(17, 0.5)), DataError);
}

TEST_CASE("backprop matches finite differences on tiny models") {
  for (std::size_t outputs : {std::size_t{1}, std::size_t{3}}) {
    auto c = tiny_config(outputs);
    Rng rng(4);
    auto model = CnnModel::initialize(c);
    for (auto& t : model.parameters())
      for (auto& v : t.values()) v = rng.uniform(-0.6, 0.6);
    std::vector<double> x(c.input_length);
    for (auto& v : x) v = rng.uniform01();
    const auto r = oracle::finite_difference_check(model, x, outputs == 1 ? 1 : 2);
    CHECK(r.max_rel_error < 1e-4);
  }
}

TEST_CASE("backward refuses a cache that does not come from forward") {
  const auto m = CnnModel::initialize(tiny_config(1));
  ForwardCache empty;
  CHECK_THROWS_AS(backward(m, empty, 0), StateError);
}

TEST_CASE("training is deterministic and learns separable data") {
  auto c = tiny_config(1);
  c.conv1_filters = 8;
  c.conv2_filters = 8;
  c.fc1_units = 16;
  c.epochs = 25;
  c.batch_size = 20;
  const auto train_set = blobs(200, c.input_length, 2, 1);
  const auto val_set = blobs(60, c.input_length, 2, 2);
  const auto a = train(c, train_set, val_set);
  const auto b = train(c, train_set, val_set);
  CHECK(a.trace == b.trace);
  CHECK(a.model.parameters() == b.model.parameters());
  REQUIRE(a.trace.size() == 25);
  CHECK(a.trace.front().epoch == 1);
  CHECK(a.trace.back().train_loss < a.trace.front().train_loss);
  CHECK(a.trace.back().val_accuracy > 0.9);
}

TEST_CASE("training input validation") {
  const auto c = tiny_config(3);
  auto s = blobs(10, c.input_length, 3, 1);
  CHECK_THROWS(train(c, {}, s));
  s[0].label = 7;
  CHECK_THROWS(train(c, s, s));
  auto short_features = blobs(10, c.input_length - 1, 3, 1);
  CHECK_THROWS(train(c, short_features, short_features));
}

TEST_CASE("metrics on a hand-computed binary matrix") {
  // truth Normal: 8 right, 2 called Attack; truth Attack: 2 missed, 8 right.
  const ConfusionMatrix m(2, {8, 2, 2, 8});
  const auto r = compute_metrics(m);
  CHECK(r.per_class[1].precision == 0.8);
  CHECK(r.per_class[1].recall == 0.8);
  CHECK(r.per_class[1].f1 == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(r.accuracy == 0.8);
  CHECK(r.per_class[0].support == 10);
}

TEST_CASE("metrics: class never predicted nor present yields zeros") {
  const ConfusionMatrix m(3, {5, 0, 0, 1, 4, 0, 0, 0, 0});
  const auto r = compute_metrics(m);
  CHECK(r.per_class[2].precision == 0.0);
  CHECK(r.per_class[2].recall == 0.0);
  CHECK(r.per_class[2].f1 == 0.0);
  CHECK(r.macro_f1 == doctest::Approx((r.per_class[0].f1 + r.per_class[1].f1) / 3.0));
}

TEST_CASE("confusion_of is independent of the thread count") {
  const auto s = blobs(300, 6, 3, 5);
  const Predictor p = [](std::span<const double> x) { return static_cast<std::size_t>(x[0] * 3) % 3; };
  const auto one = confusion_of(p, s, 3, 1);
  CHECK(one == confusion_of(p, s, 3, 7));
  CHECK(one.total() == 300);
  const Predictor bad = [](std::span<const double>) -> std::size_t { throw DataError("boom"); };
  CHECK_THROWS_AS(confusion_of(bad, s, 3, 4), DataError);
}

TEST_CASE("artifact round trip through a file") {
  testing::TempDir dir("nn");
  ModelArtifact a{CnnModel::initialize(tiny_config(3)), {0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, {}};
  a.normalization.mins.assign(10, 0.0);
  a.normalization.maxs.assign(10, 2.0);
  save_artifact(dir / "m.json", a);
  const auto b = load_artifact(dir / "m.json");
  CHECK(b.model.parameters() == a.model.parameters());
  CHECK(b.kept_indices == a.kept_indices);
  CHECK(b.normalization == a.normalization);
  CHECK(artifact_to_json(b).dump() == artifact_to_json(a).dump());

  auto doc = artifact_to_json(a);
  doc["version"] = 99;
  CHECK_THROWS_AS(artifact_from_json(doc), DataError);
  doc = artifact_to_json(a);
  doc["layers"]["fc2.bias"]["values"].push_back(1.0);
  CHECK_THROWS_AS(artifact_from_json(doc), DataError);
}
