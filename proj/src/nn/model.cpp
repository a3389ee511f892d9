#include "iiotsec/nn/model.hpp"

#include <algorithm>
#include <cmath>

#include "iiotsec/common/error.hpp"
#include "iiotsec/common/rng.hpp"

namespace iiotsec::nn {

void ModelConfig::validate() const {
  if (input_length == 0 || conv1_filters == 0 || conv2_filters == 0 || kernel_size == 0 || pool_size == 0 ||
      fc1_units == 0 || output_units == 0 || batch_size == 0 || epochs == 0)
    throw ConfigError("model config: all sizes must be positive");
  if (output_units == 2)
    throw ConfigError("model config: use output_units=1 for binary (sigmoid) or >=3 for softmax");
  if (!(learning_rate > 0.0) || momentum < 0.0 || momentum >= 1.0)
    throw ConfigError("model config: learning_rate must be > 0 and momentum in [0, 1)");
  if (input_length < kernel_size || conv1_length() < pool_size || pool1_length() < kernel_size ||
      conv2_length() < pool_size)
    throw ConfigError("model config: input length " + std::to_string(input_length) +
                      " is too short for two conv/pool stages");
}

nlohmann::json model_config_to_json(const ModelConfig& c) {
  return {{"input_length", c.input_length}, {"conv1_filters", c.conv1_filters},
          {"conv2_filters", c.conv2_filters}, {"kernel_size", c.kernel_size},
          {"pool_size", c.pool_size},       {"fc1_units", c.fc1_units},
          {"output_units", c.output_units}, {"learning_rate", c.learning_rate},
          {"momentum", c.momentum},         {"batch_size", c.batch_size},
          {"epochs", c.epochs},             {"seed", c.seed}};
}

ModelConfig model_config_from_json(const nlohmann::json& doc, ModelConfig c) {
  if (!doc.is_object()) throw ConfigError("model config must be a JSON object");
  try {
    auto read = [&](const char* key, auto& field) {
      if (doc.contains(key)) field = doc.at(key).get<std::decay_t<decltype(field)>>();
    };
    read("input_length", c.input_length);
    read("conv1_filters", c.conv1_filters);
    read("conv2_filters", c.conv2_filters);
    read("kernel_size", c.kernel_size);
    read("pool_size", c.pool_size);
    read("fc1_units", c.fc1_units);
    read("output_units", c.output_units);
    read("learning_rate", c.learning_rate);
    read("momentum", c.momentum);
    read("batch_size", c.batch_size);
    read("epochs", c.epochs);
    read("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed model config: ") + e.what());
  }
  return c;
}

const char* param_name(Param p) {
  switch (p) {
    case Param::Conv1Weights: return "conv1.weights";
    case Param::Conv1Bias: return "conv1.bias";
    case Param::Conv2Weights: return "conv2.weights";
    case Param::Conv2Bias: return "conv2.bias";
    case Param::Fc1Weights: return "fc1.weights";
    case Param::Fc1Bias: return "fc1.bias";
    case Param::Fc2Weights: return "fc2.weights";
    case Param::Fc2Bias: return "fc2.bias";
  }
  return "?";
}

std::vector<std::size_t> param_shape(const ModelConfig& c, Param p) {
  switch (p) {
    case Param::Conv1Weights: return {c.conv1_filters, 1, c.kernel_size};
    case Param::Conv1Bias: return {c.conv1_filters};
    case Param::Conv2Weights: return {c.conv2_filters, c.conv1_filters, c.kernel_size};
    case Param::Conv2Bias: return {c.conv2_filters};
    case Param::Fc1Weights: return {c.fc1_units, c.flattened_size()};
    case Param::Fc1Bias: return {c.fc1_units};
    case Param::Fc2Weights: return {c.output_units, c.fc1_units};
    case Param::Fc2Bias: return {c.output_units};
  }
  return {};
}

CnnModel CnnModel::initialize(const ModelConfig& config) {
  config.validate();
  Rng rng(config.seed);
  ParameterSet params;
  for (std::size_t i = 0; i < kParamCount; ++i) {
    const auto p = static_cast<Param>(i);
    params[i] = Tensor(param_shape(config, p));
    const bool is_weight = i % 2 == 0;
    if (!is_weight) continue;
    const auto& shape = params[i].shape();
    const std::size_t fan_in = params[i].size() / shape[0];
    const bool relu_layer = p != Param::Fc2Weights;
    const double limit = std::sqrt((relu_layer ? 6.0 : 3.0) / static_cast<double>(fan_in));
    for (double& w : params[i].values()) w = rng.uniform(-limit, limit);
  }
  return CnnModel(config, std::move(params));
}

CnnModel::CnnModel(ModelConfig config, ParameterSet params) : config_(config), params_(std::move(params)) {
  config_.validate();
  for (std::size_t i = 0; i < kParamCount; ++i) {
    const auto p = static_cast<Param>(i);
    if (params_[i].shape() != param_shape(config_, p))
      throw DataError(std::string("parameter ") + param_name(p) + " has the wrong shape for this config");
  }
}

ForwardCache CnnModel::forward(std::span<const double> features) const {
  if (features.size() != config_.input_length)
    throw DataError("model expects " + std::to_string(config_.input_length) + " features, got " +
                    std::to_string(features.size()));
  ForwardCache c;
  c.input = Tensor({1, features.size()}, std::vector<double>(features.begin(), features.end()));
  c.conv1_pre = conv1d_forward(c.input, parameter(Param::Conv1Weights), parameter(Param::Conv1Bias));
  auto pooled = maxpool1d_forward(relu(c.conv1_pre), config_.pool_size);
  c.pool1 = std::move(pooled.output);
  c.pool1_argmax = std::move(pooled.argmax);
  c.conv2_pre = conv1d_forward(c.pool1, parameter(Param::Conv2Weights), parameter(Param::Conv2Bias));
  c.conv2_act = relu(c.conv2_pre);
  const Tensor pool2 = avgpool1d_forward(c.conv2_act, config_.pool_size);
  c.flat = pool2.reshaped({pool2.size()});
  c.fc1_pre = dense_forward(c.flat, parameter(Param::Fc1Weights), parameter(Param::Fc1Bias));
  c.fc1_act = relu(c.fc1_pre);
  const Tensor logits = dense_forward(c.fc1_act, parameter(Param::Fc2Weights), parameter(Param::Fc2Bias));
  if (config_.binary()) {
    c.output = {sigmoid(logits[0])};
  } else {
    const Tensor probs = softmax(logits);
    c.output.assign(probs.values().begin(), probs.values().end());
  }
  c.valid = true;
  return c;
}

std::vector<double> CnnModel::predict_proba(std::span<const double> features) const {
  return forward(features).output;
}

std::size_t CnnModel::predict(std::span<const double> features) const {
  const auto p = predict_proba(features);
  if (config_.binary()) return p[0] >= 0.5 ? 1 : 0;
  return static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
}

double sample_loss(const ModelConfig& config, const ForwardCache& cache, std::size_t target) {
  if (!cache.valid) throw StateError("loss requested without a forward pass");
  if (config.binary()) return binary_crossentropy(cache.output[0], static_cast<double>(target));
  return categorical_crossentropy(cache.output, target);
}

ParameterSet backward(const CnnModel& model, const ForwardCache& cache, std::size_t target, double loss_scale) {
  if (!cache.valid) throw StateError("backward called before forward");
  const ModelConfig& cfg = model.config();
  if (target >= cfg.num_classes()) throw DataError("backward: target label out of range");

  // d(loss)/d(logits) for sigmoid+BCE and softmax+CE is (p - y).
  Tensor grad_logits({cfg.output_units});
  if (cfg.binary()) {
    grad_logits[0] = loss_scale * (cache.output[0] - static_cast<double>(target));
  } else {
    for (std::size_t i = 0; i < cfg.output_units; ++i)
      grad_logits[i] = loss_scale * (cache.output[i] - (i == target ? 1.0 : 0.0));
  }

  ParameterSet g;
  auto fc2 = dense_backward(cache.fc1_act, model.parameter(Param::Fc2Weights), grad_logits);
  g[static_cast<std::size_t>(Param::Fc2Weights)] = std::move(fc2.weights);
  g[static_cast<std::size_t>(Param::Fc2Bias)] = std::move(fc2.bias);

  auto fc1 = dense_backward(cache.flat, model.parameter(Param::Fc1Weights), relu_backward(cache.fc1_pre, fc2.input));
  g[static_cast<std::size_t>(Param::Fc1Weights)] = std::move(fc1.weights);
  g[static_cast<std::size_t>(Param::Fc1Bias)] = std::move(fc1.bias);

  const Tensor grad_pool2 = fc1.input.reshaped({cfg.conv2_filters, cfg.pool2_length()});
  const Tensor grad_conv2_act = avgpool1d_backward(grad_pool2, cache.conv2_act.shape(), cfg.pool_size);
  auto conv2 = conv1d_backward(cache.pool1, model.parameter(Param::Conv2Weights),
                               relu_backward(cache.conv2_pre, grad_conv2_act));
  g[static_cast<std::size_t>(Param::Conv2Weights)] = std::move(conv2.kernels);
  g[static_cast<std::size_t>(Param::Conv2Bias)] = std::move(conv2.biases);

  const Tensor grad_conv1_act = maxpool1d_backward(conv2.input, cache.pool1_argmax, cache.conv1_pre.shape());
  auto conv1 = conv1d_backward(cache.input, model.parameter(Param::Conv1Weights),
                               relu_backward(cache.conv1_pre, grad_conv1_act));
  g[static_cast<std::size_t>(Param::Conv1Weights)] = std::move(conv1.kernels);
  g[static_cast<std::size_t>(Param::Conv1Bias)] = std::move(conv1.biases);
  return g;
}

ParameterSet zeros_like(const ParameterSet& params) {
  ParameterSet out;
  for (std::size_t i = 0; i < kParamCount; ++i) out[i] = Tensor(params[i].shape());
  return out;
}

BatchGradients batch_gradients(const CnnModel& model, std::span<const LabeledSample> batch) {
  if (batch.empty()) throw DataError("batch_gradients: empty batch");
  BatchGradients result{0.0, zeros_like(model.parameters())};
  const double scale = 1.0 / static_cast<double>(batch.size());
  for (const auto& sample : batch) {
    const ForwardCache cache = model.forward(sample.features);
    result.loss += sample_loss(model.config(), cache, sample.label);
    const ParameterSet g = backward(model, cache, sample.label, scale);
    for (std::size_t i = 0; i < kParamCount; ++i) {
      auto dst = result.gradients[i].values();
      const auto src = g[i].values();
      for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += src[j];
    }
  }
  result.loss *= scale;
  return result;
}

}  // namespace iiotsec::nn
