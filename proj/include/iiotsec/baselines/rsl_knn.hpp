#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"
#include "iiotsec/nn/model.hpp"

namespace iiotsec::baselines {

using nn::LabeledSample;

struct RslKnnParams {
  std::size_t k = 5;
  std::size_t n_subspaces = 10;
  std::size_t subspace_dim = 9;
  std::uint64_t seed = 0;
};

/// Random-subspace ensemble of Euclidean KNN voters.
///
/// Each subspace is a random set of distinct feature indices (stored sorted).
/// A subspace votes for the majority label among its K nearest training
/// points (distance ties broken by training order); the ensemble answers the
/// plurality of subspace votes. All vote ties go to the smallest label.
class RslKnnModel {
 public:
  static RslKnnModel fit(std::span<const LabeledSample> train, std::size_t num_classes,
                         const RslKnnParams& params = {});

  std::size_t predict(std::span<const double> features) const;

  const RslKnnParams& params() const noexcept { return params_; }
  const std::vector<std::vector<std::size_t>>& subspaces() const noexcept { return subspaces_; }
  std::size_t num_features() const noexcept { return num_features_; }
  std::size_t train_size() const noexcept { return labels_.size(); }

  nlohmann::json to_json() const;
  static RslKnnModel from_json(const nlohmann::json& doc);

 private:
  std::size_t vote_in_subspace(std::span<const double> features, const std::vector<std::size_t>& dims) const;

  RslKnnParams params_;
  std::size_t num_classes_ = 0;
  std::size_t num_features_ = 0;
  std::vector<std::vector<std::size_t>> subspaces_;
  std::vector<double> matrix_;  // row-major training features
  std::vector<std::size_t> labels_;
};

inline RslKnnModel rsl_knn_fit(std::span<const LabeledSample> train, std::size_t num_classes,
                               const RslKnnParams& params) {
  return RslKnnModel::fit(train, num_classes, params);
}
inline std::size_t rsl_knn_predict(const RslKnnModel& model, std::span<const double> v) { return model.predict(v); }

}  // namespace iiotsec::baselines
