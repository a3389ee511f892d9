#include "iiotsec/baselines/decision_tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "iiotsec/common/error.hpp"
#include "iiotsec/common/model_envelope.hpp"

namespace iiotsec::baselines {
namespace {

std::size_t majority(const std::vector<std::uint64_t>& counts) {
  return static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

// Sum of squared class counts over node size. Larger is purer; the weighted
// child Gini is (n - score_left - score_right) / n.
double purity_score(const std::vector<std::uint64_t>& counts, std::uint64_t n) {
  if (n == 0) return 0.0;
  double s = 0.0;
  for (auto c : counts) s += static_cast<double>(c) * static_cast<double>(c);
  return s / static_cast<double>(n);
}

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double score = -1.0;
};

struct Pending {
  std::vector<std::size_t> rows;
  std::size_t depth;
  std::int32_t node;
};

}  // namespace

DecisionTree DecisionTree::fit(std::span<const LabeledSample> train, std::size_t num_classes,
                               const DecisionTreeParams& params) {
  if (train.empty()) throw ConfigError("dt_fit: empty training set");
  if (num_classes < 2) throw ConfigError("dt_fit: need at least two classes");
  if (params.min_samples_split < 2) throw ConfigError("dt_fit: min_samples_split must be >= 2");
  DecisionTree tree;
  tree.num_classes_ = num_classes;
  tree.num_features_ = train.front().features.size();
  tree.params_ = params;
  for (const auto& s : train) {
    if (s.features.size() != tree.num_features_) throw DataError("dt_fit: inconsistent feature count");
    if (s.label >= num_classes) throw DataError("dt_fit: label out of range");
    for (double v : s.features)
      if (!std::isfinite(v)) throw DataError("dt_fit: non-finite feature value");
  }

  std::vector<std::size_t> all(train.size());
  std::iota(all.begin(), all.end(), 0);
  tree.nodes_.push_back({});
  std::vector<Pending> stack;
  stack.push_back({std::move(all), 0, 0});
  std::vector<std::size_t> sorted;
  std::vector<std::uint64_t> left_counts(num_classes), right_counts(num_classes);

  while (!stack.empty()) {
    Pending job = std::move(stack.back());
    stack.pop_back();
    std::vector<std::uint64_t> counts(num_classes);
    for (auto r : job.rows) ++counts[train[r].label];
    tree.nodes_[job.node].class_counts = counts;

    const auto n = static_cast<std::uint64_t>(job.rows.size());
    const bool pure = std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }) <= 1;
    if (pure || job.rows.size() < params.min_samples_split || (params.max_depth && job.depth >= *params.max_depth))
      continue;

    Split best;
    for (std::size_t f = 0; f < tree.num_features_; ++f) {
      sorted = job.rows;
      std::stable_sort(sorted.begin(), sorted.end(),
                       [&](std::size_t a, std::size_t b) { return train[a].features[f] < train[b].features[f]; });
      std::fill(left_counts.begin(), left_counts.end(), 0);
      right_counts = counts;
      for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        const std::size_t label = train[sorted[i]].label;
        ++left_counts[label];
        --right_counts[label];
        const double v = train[sorted[i]].features[f];
        const double next = train[sorted[i + 1]].features[f];
        if (!(v < next)) continue;
        const auto nl = static_cast<std::uint64_t>(i + 1);
        const double score = purity_score(left_counts, nl) + purity_score(right_counts, n - nl);
        if (score > best.score) {
          double threshold = v + (next - v) / 2.0;
          if (!(threshold < next)) threshold = v;
          best = {static_cast<int>(f), threshold, score};
        }
      }
    }
    if (best.feature < 0) continue;  // every feature constant within the node

    std::vector<std::size_t> left_rows, right_rows;
    for (auto r : job.rows)
      (train[r].features[static_cast<std::size_t>(best.feature)] <= best.threshold ? left_rows : right_rows)
          .push_back(r);
    const auto left_id = static_cast<std::int32_t>(tree.nodes_.size());
    tree.nodes_.push_back({});
    tree.nodes_.push_back({});
    TreeNode& node = tree.nodes_[job.node];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = left_id;
    node.right = left_id + 1;
    stack.push_back({std::move(right_rows), job.depth + 1, left_id + 1});
    stack.push_back({std::move(left_rows), job.depth + 1, left_id});
  }
  return tree;
}

std::size_t DecisionTree::predict(std::span<const double> features) const {
  if (features.size() != num_features_)
    throw DataError("dt_predict: expected " + std::to_string(num_features_) + " features, got " +
                    std::to_string(features.size()));
  std::size_t i = 0;
  while (!nodes_[i].leaf())
    i = static_cast<std::size_t>(features[static_cast<std::size_t>(nodes_[i].feature)] <= nodes_[i].threshold
                                     ? nodes_[i].left
                                     : nodes_[i].right);
  return majority(nodes_[i].class_counts);
}

std::size_t DecisionTree::depth() const {
  std::size_t deepest = 0;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [i, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    if (!nodes_[i].leaf()) {
      stack.push_back({static_cast<std::size_t>(nodes_[i].left), d + 1});
      stack.push_back({static_cast<std::size_t>(nodes_[i].right), d + 1});
    }
  }
  return deepest;
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.leaf(); }));
}

nlohmann::json DecisionTree::to_json() const {
  nlohmann::json doc = make_model_envelope("decision_tree");
  doc["num_classes"] = num_classes_;
  doc["num_features"] = num_features_;
  doc["params"] = {{"max_depth", params_.max_depth ? nlohmann::json(*params_.max_depth) : nlohmann::json()},
                   {"min_samples_split", params_.min_samples_split}};
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : nodes_)
    nodes.push_back({{"feature", n.feature}, {"threshold", n.threshold}, {"left", n.left},
                     {"right", n.right}, {"class_counts", n.class_counts}});
  doc["nodes"] = std::move(nodes);
  return doc;
}

DecisionTree DecisionTree::from_json(const nlohmann::json& doc) {
  check_model_envelope(doc, "decision_tree");
  DecisionTree tree;
  try {
    tree.num_classes_ = doc.at("num_classes").get<std::size_t>();
    tree.num_features_ = doc.at("num_features").get<std::size_t>();
    const auto& p = doc.at("params");
    if (!p.at("max_depth").is_null()) tree.params_.max_depth = p.at("max_depth").get<std::size_t>();
    else tree.params_.max_depth.reset();
    tree.params_.min_samples_split = p.at("min_samples_split").get<std::size_t>();
    for (const auto& n : doc.at("nodes"))
      tree.nodes_.push_back({n.at("feature").get<int>(), n.at("threshold").get<double>(),
                             n.at("left").get<std::int32_t>(), n.at("right").get<std::int32_t>(),
                             n.at("class_counts").get<std::vector<std::uint64_t>>()});
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed decision tree: ") + e.what());
  }
  const auto count = static_cast<std::int32_t>(tree.nodes_.size());
  if (count == 0) throw DataError("decision tree has no nodes");
  for (std::int32_t i = 0; i < count; ++i) {
    const TreeNode& n = tree.nodes_[static_cast<std::size_t>(i)];
    if (n.class_counts.size() != tree.num_classes_) throw DataError("decision tree: bad class_counts");
    // children always follow their parent, which also rules out cycles
    if (!n.leaf() && (n.left <= i || n.right <= i || n.left >= count || n.right >= count ||
                      static_cast<std::size_t>(n.feature) >= tree.num_features_ || !std::isfinite(n.threshold)))
      throw DataError("decision tree: bad child index, feature or threshold");
  }
  return tree;
}

}  // namespace iiotsec::baselines
