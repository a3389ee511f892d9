#include "iiotsec/nn/optimizer.hpp"

#include "iiotsec/common/error.hpp"

namespace iiotsec::nn {

void sgd_momentum_step(Tensor& weights, const Tensor& gradient, Tensor& velocity, double learning_rate,
                       double momentum) {
  if (!weights.same_shape(gradient) || !weights.same_shape(velocity))
    throw DataError("sgd step: parameter, gradient and velocity shapes differ");
  for (std::size_t i = 0; i < weights.size(); ++i) {
    velocity[i] = momentum * velocity[i] - learning_rate * gradient[i];
    weights[i] += velocity[i];
  }
}

SgdMomentum::SgdMomentum(const ParameterSet& params, double learning_rate, double momentum)
    : velocity_(zeros_like(params)), learning_rate_(learning_rate), momentum_(momentum) {}

void SgdMomentum::step(ParameterSet& params, const ParameterSet& gradients) {
  for (std::size_t i = 0; i < kParamCount; ++i)
    sgd_momentum_step(params[i], gradients[i], velocity_[i], learning_rate_, momentum_);
}

}  // namespace iiotsec::nn
