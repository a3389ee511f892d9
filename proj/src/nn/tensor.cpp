#include "iiotsec/nn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "iiotsec/common/error.hpp"

namespace iiotsec::nn {

std::size_t shape_product(const std::vector<std::size_t>& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

Tensor::Tensor(std::vector<std::size_t> shape, double fill)
    : shape_(std::move(shape)), values_(shape_product(shape_), fill) {}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (shape_product(shape_) != values_.size())
    throw DataError("tensor shape does not match value count (" + std::to_string(values_.size()) + ")");
  if (!all_finite()) throw DataError("tensor contains non-finite values");
}

Tensor Tensor::reshaped(std::vector<std::size_t> shape) const {
  if (shape_product(shape) != values_.size()) throw DataError("reshape changes element count");
  Tensor out;
  out.shape_ = std::move(shape);
  out.values_ = values_;
  return out;
}

bool Tensor::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace iiotsec::nn
