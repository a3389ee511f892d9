#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"
#include "iiotsec/nn/layers.hpp"
#include "iiotsec/nn/tensor.hpp"

namespace iiotsec::nn {

/// Hyperparameters of the 1D CNN:
/// Conv1D -> ReLU -> MaxPool -> Conv1D -> ReLU -> AvgPool -> Dense -> ReLU -> Dense -> sigmoid|softmax.
/// output_units == 1 selects the binary sigmoid head, otherwise softmax.
struct ModelConfig {
  std::size_t input_length = 18;
  std::size_t conv1_filters = 16;
  std::size_t conv2_filters = 32;
  std::size_t kernel_size = 3;
  std::size_t pool_size = 2;
  std::size_t fc1_units = 64;
  std::size_t output_units = 1;
  double learning_rate = 0.01;
  double momentum = 0.8;
  std::size_t batch_size = 100;
  std::size_t epochs = 30;
  std::uint64_t seed = 0;

  /// Throws ConfigError if any size is zero or the input does not survive
  /// both conv/pool stages.
  void validate() const;

  bool binary() const noexcept { return output_units == 1; }
  std::size_t num_classes() const noexcept { return binary() ? 2 : output_units; }
  LossKind loss_kind() const noexcept {
    return binary() ? LossKind::BinaryCrossEntropy : LossKind::CategoricalCrossEntropy;
  }

  std::size_t conv1_length() const { return input_length - kernel_size + 1; }
  std::size_t pool1_length() const { return conv1_length() / pool_size; }
  std::size_t conv2_length() const { return pool1_length() - kernel_size + 1; }
  std::size_t pool2_length() const { return conv2_length() / pool_size; }
  std::size_t flattened_size() const { return conv2_filters * pool2_length(); }

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

nlohmann::json model_config_to_json(const ModelConfig& config);
/// Missing keys keep their defaults.
ModelConfig model_config_from_json(const nlohmann::json& doc, ModelConfig base = {});

enum class Param : std::size_t {
  Conv1Weights,
  Conv1Bias,
  Conv2Weights,
  Conv2Bias,
  Fc1Weights,
  Fc1Bias,
  Fc2Weights,
  Fc2Bias,
};
inline constexpr std::size_t kParamCount = 8;

using ParameterSet = std::array<Tensor, kParamCount>;

const char* param_name(Param p);
std::vector<std::size_t> param_shape(const ModelConfig& config, Param p);

struct LabeledSample {
  std::vector<double> features;
  std::size_t label = 0;
};

/// Activations kept from a forward pass for backpropagation.
struct ForwardCache {
  bool valid = false;
  Tensor input;
  Tensor conv1_pre;
  Tensor pool1;
  std::vector<std::size_t> pool1_argmax;
  Tensor conv2_pre;
  Tensor conv2_act;
  Tensor flat;
  Tensor fc1_pre;
  Tensor fc1_act;
  std::vector<double> output;  // probabilities
};

class CnnModel {
 public:
  /// He-style uniform init for ReLU layers, fan-in uniform for the head; zero biases.
  static CnnModel initialize(const ModelConfig& config);

  /// Throws DataError if any tensor has the wrong shape.
  CnnModel(ModelConfig config, ParameterSet params);

  const ModelConfig& config() const noexcept { return config_; }
  const ParameterSet& parameters() const noexcept { return params_; }
  ParameterSet& parameters() noexcept { return params_; }
  const Tensor& parameter(Param p) const { return params_[static_cast<std::size_t>(p)]; }
  Tensor& parameter(Param p) { return params_[static_cast<std::size_t>(p)]; }

  ForwardCache forward(std::span<const double> features) const;
  std::vector<double> predict_proba(std::span<const double> features) const;
  /// Binary: probability >= 0.5 -> 1. Multiclass: argmax (lowest index on ties).
  std::size_t predict(std::span<const double> features) const;

 private:
  ModelConfig config_;
  ParameterSet params_;
};

/// Per-sample loss of a cached forward pass.
double sample_loss(const ModelConfig& config, const ForwardCache& cache, std::size_t target);

/// Gradient of loss_scale * sample_loss w.r.t. every parameter.
/// Throws StateError if the cache does not come from a forward pass.
ParameterSet backward(const CnnModel& model, const ForwardCache& cache, std::size_t target, double loss_scale = 1.0);

struct BatchGradients {
  double loss = 0.0;  // mean over the batch
  ParameterSet gradients;
};

/// Mean loss and mean gradient over a batch.
BatchGradients batch_gradients(const CnnModel& model, std::span<const LabeledSample> batch);

ParameterSet zeros_like(const ParameterSet& params);

}  // namespace iiotsec::nn
