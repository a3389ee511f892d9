#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "iiotsec/nn/model.hpp"

namespace iiotsec::baselines {

using nn::LabeledSample;

struct DecisionTreeParams {
  std::optional<std::size_t> max_depth = 12;  // nullopt grows until leaves are pure
  std::size_t min_samples_split = 2;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::int32_t left = -1;   // taken when x[feature] <= threshold
  std::int32_t right = -1;
  std::vector<std::uint64_t> class_counts;

  bool leaf() const noexcept { return feature < 0; }
};

/// CART classifier with Gini impurity.
class DecisionTree {
 public:
  /// Greedy best split per node; ties go to the lowest feature index, then the
  /// lowest threshold. Thresholds are midpoints between adjacent distinct values.
  static DecisionTree fit(std::span<const LabeledSample> train, std::size_t num_classes,
                          const DecisionTreeParams& params = {});

  std::size_t predict(std::span<const double> features) const;

  std::size_t num_classes() const noexcept { return num_classes_; }
  std::size_t num_features() const noexcept { return num_features_; }
  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  std::size_t depth() const;
  std::size_t leaf_count() const;

  nlohmann::json to_json() const;
  static DecisionTree from_json(const nlohmann::json& doc);

 private:
  std::size_t num_classes_ = 0;
  std::size_t num_features_ = 0;
  DecisionTreeParams params_;
  std::vector<TreeNode> nodes_;
};

inline DecisionTree dt_fit(std::span<const LabeledSample> train, std::size_t num_classes,
                           const DecisionTreeParams& params = {}) {
  return DecisionTree::fit(train, num_classes, params);
}
inline std::size_t dt_predict(const DecisionTree& tree, std::span<const double> v) { return tree.predict(v); }

}  // namespace iiotsec::baselines
