#pragma once

// Brute-force reference implementations used to check the layer code.
// They follow the textbook definitions directly and share nothing with the
// library beyond the Tensor container.

#include <algorithm>
#include <cmath>
#include <vector>

#include "iiotsec/common/rng.hpp"
#include "iiotsec/nn/model.hpp"
#include "iiotsec/nn/tensor.hpp"

namespace oracle {

using iiotsec::nn::Tensor;

// out[f][t] = b[f] + sum_c sum_j in[c][t + j] * w[f][c][j]
inline std::vector<std::vector<double>> conv1d(const std::vector<std::vector<double>>& in,
                                               const std::vector<std::vector<std::vector<double>>>& w,
                                               const std::vector<double>& b) {
  const std::size_t k = w[0][0].size();
  const std::size_t out_len = in[0].size() - k + 1;
  std::vector<std::vector<double>> out(w.size(), std::vector<double>(out_len));
  for (std::size_t f = 0; f < w.size(); ++f)
    for (std::size_t t = 0; t < out_len; ++t) {
      long double acc = b[f];
      for (std::size_t c = 0; c < in.size(); ++c)
        for (std::size_t j = 0; j < k; ++j) acc += static_cast<long double>(in[c][t + j]) * w[f][c][j];
      out[f][t] = static_cast<double>(acc);
    }
  return out;
}

inline std::vector<std::vector<double>> maxpool(const std::vector<std::vector<double>>& in, std::size_t p) {
  std::vector<std::vector<double>> out;
  for (const auto& row : in) {
    std::vector<double> r;
    for (std::size_t s = 0; s + p <= row.size(); s += p) r.push_back(*std::max_element(row.begin() + s, row.begin() + s + p));
    out.push_back(r);
  }
  return out;
}

inline std::vector<std::vector<double>> avgpool(const std::vector<std::vector<double>>& in, std::size_t p) {
  std::vector<std::vector<double>> out;
  for (const auto& row : in) {
    std::vector<double> r;
    for (std::size_t s = 0; s + p <= row.size(); s += p) {
      long double acc = 0;
      for (std::size_t j = 0; j < p; ++j) acc += row[s + j];
      r.push_back(static_cast<double>(acc / p));
    }
    out.push_back(r);
  }
  return out;
}

inline std::vector<double> dense(const std::vector<double>& in, const std::vector<std::vector<double>>& w,
                                 const std::vector<double>& b) {
  std::vector<double> out(w.size());
  for (std::size_t o = 0; o < w.size(); ++o) {
    long double acc = b[o];
    for (std::size_t i = 0; i < in.size(); ++i) acc += static_cast<long double>(w[o][i]) * in[i];
    out[o] = static_cast<double>(acc);
  }
  return out;
}

// Nested-vector views of tensors.
inline std::vector<std::vector<double>> rows(const Tensor& t) {
  std::vector<std::vector<double>> out(t.dim(0), std::vector<double>(t.dim(1)));
  for (std::size_t i = 0; i < t.dim(0); ++i)
    for (std::size_t j = 0; j < t.dim(1); ++j) out[i][j] = t.at(i, j);
  return out;
}

inline std::vector<std::vector<std::vector<double>>> cube(const Tensor& t) {
  std::vector<std::vector<std::vector<double>>> out(
      t.dim(0), std::vector<std::vector<double>>(t.dim(1), std::vector<double>(t.dim(2))));
  for (std::size_t i = 0; i < t.dim(0); ++i)
    for (std::size_t j = 0; j < t.dim(1); ++j)
      for (std::size_t k = 0; k < t.dim(2); ++k) out[i][j][k] = t.at(i, j, k);
  return out;
}

inline Tensor random_tensor(iiotsec::Rng& rng, std::vector<std::size_t> shape, double lo = -1.0, double hi = 1.0) {
  Tensor t(std::move(shape));
  for (auto& v : t.values()) v = rng.uniform(lo, hi);
  return t;
}

struct GradCheck {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
};

// Central differences of sample_loss with respect to every parameter entry,
// compared to backward(). Relative error is |a - n| / max(|a|, |n|, floor).
inline GradCheck finite_difference_check(const iiotsec::nn::CnnModel& model, const std::vector<double>& x,
                                         std::size_t target, double h = 1e-5, double floor = 1e-6) {
  using namespace iiotsec::nn;
  const auto cache = model.forward(x);
  const ParameterSet analytic = backward(model, cache, target);
  GradCheck out;
  CnnModel probe = model;
  for (std::size_t p = 0; p < kParamCount; ++p) {
    Tensor& t = probe.parameters()[p];
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double saved = t[i];
      t[i] = saved + h;
      const double up = sample_loss(probe.config(), probe.forward(x), target);
      t[i] = saved - h;
      const double down = sample_loss(probe.config(), probe.forward(x), target);
      t[i] = saved;
      const double numeric = (up - down) / (2 * h);
      const double a = analytic[p][i];
      const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), floor});
      out.max_rel_error = std::max(out.max_rel_error, rel);
      ++out.checked;
    }
  }
  return out;
}

}  // namespace oracle
