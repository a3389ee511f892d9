#include "iiotsec/nn/layers.hpp"

#include <algorithm>
#include <cmath>

#include "iiotsec/common/error.hpp"

namespace iiotsec::nn {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DataError(what);
}

}  // namespace

Tensor conv1d_forward(const Tensor& input, const Tensor& kernels, const Tensor& biases) {
  require(input.rank() == 2 && kernels.rank() == 3 && biases.rank() == 1, "conv1d: bad tensor ranks");
  const std::size_t channels = input.dim(0), length = input.dim(1);
  const std::size_t filters = kernels.dim(0), k = kernels.dim(2);
  require(kernels.dim(1) == channels, "conv1d: kernel channel count does not match input");
  require(biases.dim(0) == filters, "conv1d: bias count does not match filter count");
  require(k > 0 && length >= k, "conv1d: input shorter than kernel");
  const std::size_t out_len = length - k + 1;
  Tensor out({filters, out_len});
  for (std::size_t f = 0; f < filters; ++f) {
    for (std::size_t i = 0; i < out_len; ++i) {
      double acc = biases[f];
      for (std::size_t c = 0; c < channels; ++c)
        for (std::size_t j = 0; j < k; ++j) acc += input.at(c, i + j) * kernels.at(f, c, j);
      out.at(f, i) = acc;
    }
  }
  return out;
}

Conv1dGrads conv1d_backward(const Tensor& input, const Tensor& kernels, const Tensor& grad_output) {
  const std::size_t channels = input.dim(0);
  const std::size_t filters = kernels.dim(0), k = kernels.dim(2);
  require(grad_output.rank() == 2 && grad_output.dim(0) == filters &&
              grad_output.dim(1) + k - 1 == input.dim(1),
          "conv1d_backward: gradient shape mismatch");
  const std::size_t out_len = grad_output.dim(1);
  Conv1dGrads g{Tensor(input.shape()), Tensor(kernels.shape()), Tensor({filters})};
  for (std::size_t f = 0; f < filters; ++f) {
    for (std::size_t i = 0; i < out_len; ++i) {
      const double go = grad_output.at(f, i);
      g.biases[f] += go;
      for (std::size_t c = 0; c < channels; ++c) {
        for (std::size_t j = 0; j < k; ++j) {
          g.kernels.at(f, c, j) += go * input.at(c, i + j);
          g.input.at(c, i + j) += go * kernels.at(f, c, j);
        }
      }
    }
  }
  return g;
}

MaxPoolResult maxpool1d_forward(const Tensor& input, std::size_t pool) {
  require(input.rank() == 2, "maxpool1d: input must be [channels, length]");
  require(pool > 0 && input.dim(1) >= pool, "maxpool1d: pool larger than input");
  const std::size_t channels = input.dim(0), length = input.dim(1), out_len = length / pool;
  MaxPoolResult r{Tensor({channels, out_len}), std::vector<std::size_t>(channels * out_len)};
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t i = 0; i < out_len; ++i) {
      std::size_t best = c * length + i * pool;
      for (std::size_t j = 1; j < pool; ++j) {
        const std::size_t idx = c * length + i * pool + j;
        if (input[idx] > input[best]) best = idx;
      }
      r.output.at(c, i) = input[best];
      r.argmax[c * out_len + i] = best;
    }
  }
  return r;
}

Tensor maxpool1d_backward(const Tensor& grad_output, std::span<const std::size_t> argmax,
                          const std::vector<std::size_t>& input_shape) {
  require(argmax.size() == grad_output.size(), "maxpool1d_backward: argmax size mismatch");
  Tensor g(input_shape);
  for (std::size_t i = 0; i < argmax.size(); ++i) g[argmax[i]] += grad_output[i];
  return g;
}

Tensor avgpool1d_forward(const Tensor& input, std::size_t pool) {
  require(input.rank() == 2, "avgpool1d: input must be [channels, length]");
  require(pool > 0 && input.dim(1) >= pool, "avgpool1d: pool larger than input");
  const std::size_t channels = input.dim(0), out_len = input.dim(1) / pool;
  Tensor out({channels, out_len});
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t i = 0; i < out_len; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < pool; ++j) acc += input.at(c, i * pool + j);
      out.at(c, i) = acc / static_cast<double>(pool);
    }
  }
  return out;
}

Tensor avgpool1d_backward(const Tensor& grad_output, const std::vector<std::size_t>& input_shape, std::size_t pool) {
  require(input_shape.size() == 2 && grad_output.rank() == 2 && grad_output.dim(1) == input_shape[1] / pool,
          "avgpool1d_backward: gradient shape mismatch");
  Tensor g(input_shape);
  const double share = 1.0 / static_cast<double>(pool);
  for (std::size_t c = 0; c < grad_output.dim(0); ++c)
    for (std::size_t i = 0; i < grad_output.dim(1); ++i)
      for (std::size_t j = 0; j < pool; ++j) g.at(c, i * pool + j) = grad_output.at(c, i) * share;
  return g;
}

Tensor dense_forward(const Tensor& input, const Tensor& weights, const Tensor& bias) {
  require(weights.rank() == 2 && bias.rank() == 1, "dense: bad tensor ranks");
  const std::size_t out_n = weights.dim(0), in_n = weights.dim(1);
  require(input.size() == in_n, "dense: input size does not match weights");
  require(bias.dim(0) == out_n, "dense: bias size does not match weights");
  Tensor out({out_n});
  for (std::size_t o = 0; o < out_n; ++o) {
    double acc = bias[o];
    for (std::size_t i = 0; i < in_n; ++i) acc += weights.at(o, i) * input[i];
    out[o] = acc;
  }
  return out;
}

DenseGrads dense_backward(const Tensor& input, const Tensor& weights, const Tensor& grad_output) {
  const std::size_t out_n = weights.dim(0), in_n = weights.dim(1);
  require(grad_output.size() == out_n && input.size() == in_n, "dense_backward: shape mismatch");
  DenseGrads g{Tensor(input.shape()), Tensor(weights.shape()), Tensor({out_n})};
  for (std::size_t o = 0; o < out_n; ++o) {
    const double go = grad_output[o];
    g.bias[o] = go;
    for (std::size_t i = 0; i < in_n; ++i) {
      g.weights.at(o, i) = go * input[i];
      g.input[i] += go * weights.at(o, i);
    }
  }
  return g;
}

Tensor relu(const Tensor& x) {
  Tensor out = x;
  for (double& v : out.values()) v = std::max(v, 0.0);
  return out;
}

Tensor relu_backward(const Tensor& pre_activation, const Tensor& grad_output) {
  require(pre_activation.same_shape(grad_output), "relu_backward: shape mismatch");
  Tensor g = grad_output;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (pre_activation[i] <= 0.0) g[i] = 0.0;
  return g;
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Tensor softmax(const Tensor& logits) {
  require(!logits.empty(), "softmax: empty input");
  const auto v = logits.values();
  const double peak = *std::max_element(v.begin(), v.end());
  Tensor out(logits.shape());
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::exp(v[i] - peak);
    total += out[i];
  }
  for (double& p : out.values()) p /= total;
  return out;
}

double binary_crossentropy(double probability, double target) {
  const double p = std::clamp(probability, kProbabilityEpsilon, 1.0 - kProbabilityEpsilon);
  return -(target * std::log(p) + (1.0 - target) * std::log(1.0 - p));
}

double categorical_crossentropy(std::span<const double> probabilities, std::size_t target) {
  require(target < probabilities.size(), "categorical_crossentropy: target out of range");
  return -std::log(std::clamp(probabilities[target], kProbabilityEpsilon, 1.0));
}

double loss(std::span<const std::vector<double>> predictions, std::span<const std::size_t> targets, LossKind kind) {
  require(predictions.size() == targets.size() && !predictions.empty(), "loss: empty or mismatched batch");
  double total = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (kind == LossKind::BinaryCrossEntropy) {
      require(predictions[i].size() == 1, "binary loss expects one probability per sample");
      total += binary_crossentropy(predictions[i][0], static_cast<double>(targets[i]));
    } else {
      total += categorical_crossentropy(predictions[i], targets[i]);
    }
  }
  return total / static_cast<double>(predictions.size());
}

}  // namespace iiotsec::nn
