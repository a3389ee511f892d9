#include "iiotsec/baselines/rsl_knn.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include "iiotsec/common/error.hpp"
#include "iiotsec/common/model_envelope.hpp"
#include "iiotsec/common/rng.hpp"

namespace iiotsec::baselines {
namespace {

std::size_t plurality(const std::vector<std::size_t>& votes) {
  return static_cast<std::size_t>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

void check_params(const RslKnnParams& p, std::size_t train_size, std::size_t num_features) {
  if (p.k == 0) throw ConfigError("rsl_knn: K must be positive");
  if (p.k > train_size)
    throw ConfigError("rsl_knn: K=" + std::to_string(p.k) + " exceeds training size " + std::to_string(train_size));
  if (p.n_subspaces == 0) throw ConfigError("rsl_knn: n_subspaces must be positive");
  if (p.subspace_dim == 0 || p.subspace_dim > num_features)
    throw ConfigError("rsl_knn: subspace_dim must be in 1.." + std::to_string(num_features));
}

}  // namespace

RslKnnModel RslKnnModel::fit(std::span<const LabeledSample> train, std::size_t num_classes,
                             const RslKnnParams& params) {
  if (train.empty()) throw ConfigError("rsl_knn_fit: empty training set");
  if (num_classes < 2) throw ConfigError("rsl_knn_fit: need at least two classes");
  RslKnnModel m;
  m.params_ = params;
  m.num_classes_ = num_classes;
  m.num_features_ = train.front().features.size();
  check_params(params, train.size(), m.num_features_);

  m.matrix_.reserve(train.size() * m.num_features_);
  for (const auto& s : train) {
    if (s.features.size() != m.num_features_) throw DataError("rsl_knn_fit: inconsistent feature count");
    if (s.label >= num_classes) throw DataError("rsl_knn_fit: label out of range");
    m.matrix_.insert(m.matrix_.end(), s.features.begin(), s.features.end());
    m.labels_.push_back(s.label);
  }

  Rng rng(params.seed);
  std::vector<std::size_t> pool(m.num_features_);
  for (std::size_t s = 0; s < params.n_subspaces; ++s) {
    std::iota(pool.begin(), pool.end(), 0);
    // partial Fisher-Yates: the first subspace_dim slots are a uniform sample
    for (std::size_t i = 0; i < params.subspace_dim; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
      std::swap(pool[i], pool[j]);
    }
    std::vector<std::size_t> dims(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(params.subspace_dim));
    std::sort(dims.begin(), dims.end());
    m.subspaces_.push_back(std::move(dims));
  }
  return m;
}

std::size_t RslKnnModel::vote_in_subspace(std::span<const double> x, const std::vector<std::size_t>& dims) const {
  const std::size_t n = labels_.size();
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = matrix_.data() + i * num_features_;
    double d = 0.0;
    for (std::size_t f : dims) {
      const double diff = row[f] - x[f];
      d += diff * diff;
    }
    dist[i] = {d, i};
  }
  const auto kth = dist.begin() + static_cast<std::ptrdiff_t>(params_.k);
  std::nth_element(dist.begin(), kth - 1, dist.end());
  std::vector<std::size_t> votes(num_classes_);
  for (auto it = dist.begin(); it != kth; ++it) ++votes[labels_[it->second]];
  return plurality(votes);
}

std::size_t RslKnnModel::predict(std::span<const double> features) const {
  if (features.size() != num_features_)
    throw DataError("rsl_knn_predict: expected " + std::to_string(num_features_) + " features, got " +
                    std::to_string(features.size()));
  std::vector<std::size_t> votes(num_classes_);
  for (const auto& dims : subspaces_) ++votes[vote_in_subspace(features, dims)];
  return plurality(votes);
}

nlohmann::json RslKnnModel::to_json() const {
  nlohmann::json doc = make_model_envelope("rsl_knn");
  doc["params"] = {{"k", params_.k}, {"n_subspaces", params_.n_subspaces},
                   {"subspace_dim", params_.subspace_dim}, {"seed", params_.seed}};
  doc["num_classes"] = num_classes_;
  doc["num_features"] = num_features_;
  doc["subspaces"] = subspaces_;
  doc["train_features"] = matrix_;
  doc["train_labels"] = labels_;
  return doc;
}

RslKnnModel RslKnnModel::from_json(const nlohmann::json& doc) {
  check_model_envelope(doc, "rsl_knn");
  RslKnnModel m;
  try {
    const auto& p = doc.at("params");
    m.params_ = {p.at("k").get<std::size_t>(), p.at("n_subspaces").get<std::size_t>(),
                 p.at("subspace_dim").get<std::size_t>(), p.at("seed").get<std::uint64_t>()};
    m.num_classes_ = doc.at("num_classes").get<std::size_t>();
    m.num_features_ = doc.at("num_features").get<std::size_t>();
    m.subspaces_ = doc.at("subspaces").get<std::vector<std::vector<std::size_t>>>();
    m.matrix_ = doc.at("train_features").get<std::vector<double>>();
    m.labels_ = doc.at("train_labels").get<std::vector<std::size_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed rsl_knn model: ") + e.what());
  }
  if (m.matrix_.size() != m.labels_.size() * m.num_features_) throw DataError("rsl_knn model: matrix size mismatch");
  try {
    check_params(m.params_, m.labels_.size(), m.num_features_);
  } catch (const ConfigError& e) {
    throw DataError(e.what());
  }
  for (const auto& dims : m.subspaces_) {
    if (dims.size() != m.params_.subspace_dim) throw DataError("rsl_knn model: subspace size mismatch");
    for (std::size_t i = 0; i < dims.size(); ++i)
      if (dims[i] >= m.num_features_ || (i > 0 && dims[i] <= dims[i - 1]))
        throw DataError("rsl_knn model: subspace indices must be distinct, sorted and in range");
  }
  for (auto l : m.labels_)
    if (l >= m.num_classes_) throw DataError("rsl_knn model: label out of range");
  return m;
}

}  // namespace iiotsec::baselines
