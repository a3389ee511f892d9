#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "iiotsec/nn/tensor.hpp"

namespace iiotsec::nn {

// Layer primitives on single samples. Convolution/pooling inputs are
// [channels, length]; dense inputs are flat. Shape mismatches throw DataError.

/// Valid (unpadded) stride-1 cross-correlation.
/// kernels: [filters, channels, k], biases: [filters] -> [filters, length - k + 1]
Tensor conv1d_forward(const Tensor& input, const Tensor& kernels, const Tensor& biases);

struct Conv1dGrads {
  Tensor input;
  Tensor kernels;
  Tensor biases;
};
Conv1dGrads conv1d_backward(const Tensor& input, const Tensor& kernels, const Tensor& grad_output);

/// Non-overlapping windows of `pool`; a trailing remainder is dropped.
struct MaxPoolResult {
  Tensor output;
  std::vector<std::size_t> argmax;  // flat input index of each output's maximum
};
MaxPoolResult maxpool1d_forward(const Tensor& input, std::size_t pool);
Tensor maxpool1d_backward(const Tensor& grad_output, std::span<const std::size_t> argmax,
                          const std::vector<std::size_t>& input_shape);

Tensor avgpool1d_forward(const Tensor& input, std::size_t pool);
Tensor avgpool1d_backward(const Tensor& grad_output, const std::vector<std::size_t>& input_shape, std::size_t pool);

/// weights: [out, in], bias: [out]
Tensor dense_forward(const Tensor& input, const Tensor& weights, const Tensor& bias);

struct DenseGrads {
  Tensor input;
  Tensor weights;
  Tensor bias;
};
DenseGrads dense_backward(const Tensor& input, const Tensor& weights, const Tensor& grad_output);

Tensor relu(const Tensor& x);
/// Gradient through ReLU given the pre-activation.
Tensor relu_backward(const Tensor& pre_activation, const Tensor& grad_output);

double sigmoid(double x);
/// Max-subtracted softmax over a flat tensor.
Tensor softmax(const Tensor& logits);

enum class LossKind { BinaryCrossEntropy, CategoricalCrossEntropy };

inline constexpr double kProbabilityEpsilon = 1e-12;

/// -[y log p + (1-y) log(1-p)] with p clipped to [eps, 1-eps].
double binary_crossentropy(double probability, double target);
/// -log p[target] with p clipped to [eps, 1].
double categorical_crossentropy(std::span<const double> probabilities, std::size_t target);

/// Mean per-sample loss. For binary loss each prediction has one value.
double loss(std::span<const std::vector<double>> predictions, std::span<const std::size_t> targets, LossKind kind);

}  // namespace iiotsec::nn
