#include "iiotsec/nn/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "iiotsec/common/rng.hpp"
#include "iiotsec/nn/optimizer.hpp"

namespace iiotsec::nn {

LossAccuracy measure(const CnnModel& model, std::span<const LabeledSample> samples) {
  if (samples.empty()) throw DataError("measure: empty sample set");
  LossAccuracy r;
  std::size_t correct = 0;
  for (const auto& s : samples) {
    const ForwardCache cache = model.forward(s.features);
    r.loss += sample_loss(model.config(), cache, s.label);
    std::size_t predicted = 0;
    if (model.config().binary()) {
      predicted = cache.output[0] >= 0.5 ? 1 : 0;
    } else {
      predicted = static_cast<std::size_t>(std::max_element(cache.output.begin(), cache.output.end()) -
                                           cache.output.begin());
    }
    if (predicted == s.label) ++correct;
  }
  r.loss /= static_cast<double>(samples.size());
  r.accuracy = static_cast<double>(correct) / static_cast<double>(samples.size());
  return r;
}

TrainingResult train(const ModelConfig& config, std::span<const LabeledSample> train_set,
                     std::span<const LabeledSample> validation_set, const EpochCallback& on_epoch) {
  config.validate();
  if (train_set.empty() || validation_set.empty()) throw DataError("train: empty training or validation set");
  for (const auto& s : train_set) {
    if (s.features.size() != config.input_length)
      throw DataError("train: sample has " + std::to_string(s.features.size()) + " features, model expects " +
                      std::to_string(config.input_length));
    if (s.label >= config.num_classes()) throw DataError("train: label out of range for model head");
  }

  TrainingResult result{CnnModel::initialize(config), {}};
  SgdMomentum optimizer(result.model.parameters(), config.learning_rate, config.momentum);
  Rng order_rng(config.seed ^ 0x5deece66dULL);

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<LabeledSample> batch;
  batch.reserve(config.batch_size);

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    order_rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      batch.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(train_set[order[i]]);
      const BatchGradients g = batch_gradients(result.model, batch);
      if (!std::isfinite(g.loss))
        throw TrainingError("non-finite loss at epoch " + std::to_string(epoch) + ", batch starting at " +
                            std::to_string(start) + " (try a smaller learning rate)");
      optimizer.step(result.model.parameters(), g.gradients);
    }
    const LossAccuracy tr = measure(result.model, train_set);
    const LossAccuracy va = measure(result.model, validation_set);
    if (!std::isfinite(tr.loss) || !std::isfinite(va.loss))
      throw TrainingError("non-finite loss after epoch " + std::to_string(epoch));
    result.trace.push_back({epoch, tr.loss, tr.accuracy, va.loss, va.accuracy});
    if (on_epoch) on_epoch(result.trace.back());
  }
  return result;
}

}  // namespace iiotsec::nn
