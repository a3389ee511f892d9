#pragma once

#include "iiotsec/nn/model.hpp"
#include "iiotsec/nn/tensor.hpp"

namespace iiotsec::nn {

/// Classical momentum: v <- momentum * v - lr * g; w <- w + v.
void sgd_momentum_step(Tensor& weights, const Tensor& gradient, Tensor& velocity, double learning_rate,
                       double momentum);

class SgdMomentum {
 public:
  SgdMomentum(const ParameterSet& params, double learning_rate, double momentum);

  void step(ParameterSet& params, const ParameterSet& gradients);

  const ParameterSet& velocities() const noexcept { return velocity_; }
  double learning_rate() const noexcept { return learning_rate_; }
  double momentum() const noexcept { return momentum_; }

 private:
  ParameterSet velocity_;
  double learning_rate_;
  double momentum_;
};

}  // namespace iiotsec::nn
