#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "iiotsec/common/error.hpp"
#include "iiotsec/nn/model.hpp"

namespace iiotsec::nn {

struct EpochTrace {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;

  friend bool operator==(const EpochTrace&, const EpochTrace&) = default;
};

/// Raised when the loss becomes non-finite.
class TrainingError : public Error {
 public:
  using Error::Error;
};

struct TrainingResult {
  CnnModel model;
  std::vector<EpochTrace> trace;
};

struct LossAccuracy {
  double loss = 0.0;
  double accuracy = 0.0;
};

/// Mean loss and accuracy of the model over a sample set.
LossAccuracy measure(const CnnModel& model, std::span<const LabeledSample> samples);

using EpochCallback = std::function<void(const EpochTrace&)>;

/// Mini-batch SGD with momentum for config.epochs epochs. Batches are drawn
/// from a per-epoch shuffle seeded by config.seed; the last batch of an epoch
/// may be smaller. Trace losses are measured on the full train/validation
/// sets after each epoch.
TrainingResult train(const ModelConfig& config, std::span<const LabeledSample> train_set,
                     std::span<const LabeledSample> validation_set, const EpochCallback& on_epoch = {});

}  // namespace iiotsec::nn
