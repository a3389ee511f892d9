#include "iiotsec/dataset/preprocess.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "iiotsec/common/rng.hpp"

namespace iiotsec::dataset {
namespace {

template <typename Row, typename GetFeatures>
FeatureDropResult drop_constant_impl(std::span<const Row> records, GetFeatures features_of) {
  if (records.empty()) throw ConfigError("drop_constant_features: empty record list");
  const auto& first = features_of(records.front());
  const std::size_t width = first.size();
  FeatureDropResult result;
  for (std::size_t col = 0; col < width; ++col) {
    const double v0 = first[col];
    const bool varies = std::any_of(records.begin(), records.end(),
                                    [&](const Row& r) { return features_of(r)[col] != v0; });
    if (varies) result.kept_indices.push_back(col);
  }
  result.records.reserve(records.size());
  for (const auto& r : records) {
    const auto& f = features_of(r);
    if (f.size() != width) throw DataError("drop_constant_features: inconsistent feature count");
    result.records.push_back({select_features(std::span<const double>(f.data(), f.size()), result.kept_indices),
                              r.label8});
  }
  return result;
}

std::size_t rounded(double x) { return static_cast<std::size_t>(std::floor(x + 0.5 + 1e-9)); }

// Distributes `target` samples over classes so that each class receives the
// floor or ceiling of its exact share `count * ratio`, bounded by capacity.
std::vector<std::size_t> apportion(std::span<const std::size_t> counts, std::span<const std::size_t> capacity,
                                   double ratio, std::size_t target) {
  const std::size_t k = counts.size();
  std::vector<std::size_t> alloc(k);
  std::vector<double> frac(k);
  std::size_t total = 0;
  for (std::size_t c = 0; c < k; ++c) {
    const double exact = static_cast<double>(counts[c]) * ratio;
    alloc[c] = std::min(capacity[c], static_cast<std::size_t>(std::floor(exact + 1e-9)));
    frac[c] = exact - static_cast<double>(alloc[c]);
    total += alloc[c];
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  while (total < target) {
    bool progressed = false;
    for (std::size_t c : order) {
      if (total == target) break;
      if (alloc[c] < capacity[c]) {
        ++alloc[c];
        ++total;
        progressed = true;
      }
    }
    if (!progressed) break;
  }
  return alloc;
}

}  // namespace

FeatureDropResult drop_constant_features(std::span<const RawRecord> records) {
  return drop_constant_impl(records, [](const RawRecord& r) -> const RawFeatures& { return r.features; });
}

FeatureDropResult drop_constant_features(std::span<const ReducedRecord> records) {
  return drop_constant_impl(records, [](const ReducedRecord& r) -> const std::vector<double>& { return r.features; });
}

std::vector<double> select_features(std::span<const double> raw, std::span<const std::size_t> kept_indices) {
  std::vector<double> out;
  out.reserve(kept_indices.size());
  for (std::size_t idx : kept_indices) {
    if (idx >= raw.size()) throw DataError("feature index " + std::to_string(idx) + " out of range");
    out.push_back(raw[idx]);
  }
  return out;
}

NormalizationParams fit_minmax(std::span<const std::vector<double>> rows) {
  if (rows.empty()) throw ConfigError("fit_minmax: empty training set");
  NormalizationParams p{rows.front(), rows.front()};
  for (const auto& row : rows) {
    if (row.size() != p.size()) throw DataError("fit_minmax: inconsistent feature count");
    for (std::size_t j = 0; j < row.size(); ++j) {
      p.mins[j] = std::min(p.mins[j], row[j]);
      p.maxs[j] = std::max(p.maxs[j], row[j]);
    }
  }
  return p;
}

MinMaxScaler::MinMaxScaler(NormalizationParams params) : params_(std::move(params)), fitted_(true) {
  if (params_.mins.size() != params_.maxs.size()) throw DataError("normalization params: mins/maxs size mismatch");
  for (std::size_t j = 0; j < params_.size(); ++j)
    if (!(params_.mins[j] <= params_.maxs[j])) throw DataError("normalization params: min > max");
}

void MinMaxScaler::fit(std::span<const std::vector<double>> rows) {
  params_ = fit_minmax(rows);
  fitted_ = true;
}

const NormalizationParams& MinMaxScaler::params() const {
  if (!fitted_) throw StateError("MinMaxScaler used before fit");
  return params_;
}

std::vector<double> MinMaxScaler::transform(std::span<const double> values) const {
  if (!fitted_) throw StateError("MinMaxScaler::transform called before fit");
  if (values.size() != params_.size())
    throw DataError("transform: expected " + std::to_string(params_.size()) + " features, got " +
                    std::to_string(values.size()));
  std::vector<double> out(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double range = params_.maxs[j] - params_.mins[j];
    out[j] = range > 0.0 ? std::clamp((values[j] - params_.mins[j]) / range, 0.0, 1.0) : 0.0;
  }
  return out;
}

std::vector<double> MinMaxScaler::inverse_transform(std::span<const double> scaled) const {
  if (!fitted_) throw StateError("MinMaxScaler::inverse_transform called before fit");
  if (scaled.size() != params_.size()) throw DataError("inverse_transform: feature count mismatch");
  std::vector<double> out(scaled.size());
  for (std::size_t j = 0; j < scaled.size(); ++j)
    out[j] = params_.mins[j] + scaled[j] * (params_.maxs[j] - params_.mins[j]);
  return out;
}

nlohmann::json normalization_to_json(std::span<const std::size_t> kept_indices, const NormalizationParams& params) {
  nlohmann::json doc;
  doc["kept_indices"] = std::vector<std::size_t>(kept_indices.begin(), kept_indices.end());
  doc["mins"] = params.mins;
  doc["maxs"] = params.maxs;
  return doc;
}

void normalization_from_json(const nlohmann::json& doc, std::vector<std::size_t>& kept_indices,
                             NormalizationParams& params) {
  try {
    kept_indices = doc.at("kept_indices").get<std::vector<std::size_t>>();
    params.mins = doc.at("mins").get<std::vector<double>>();
    params.maxs = doc.at("maxs").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed normalization document: ") + e.what());
  }
  if (params.mins.size() != kept_indices.size() || params.maxs.size() != kept_indices.size())
    throw DataError("normalization document: kept_indices/mins/maxs length mismatch");
  MinMaxScaler check(params);  // validates min <= max
}

DatasetSplit split(std::span<const ClassLabel8> labels, const SplitRatios& ratios, std::uint64_t seed) {
  if (ratios.train < 0 || ratios.validation < 0 || ratios.test < 0 ||
      std::abs(ratios.train + ratios.validation + ratios.test - 1.0) > 1e-9)
    throw ConfigError("split ratios must be non-negative and sum to 1");

  std::array<std::vector<std::size_t>, kLabel4Count> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i)
    by_class[static_cast<std::size_t>(regroup_label(labels[i]))].push_back(i);

  Rng rng(seed);
  std::vector<std::size_t> counts(kLabel4Count);
  for (std::size_t c = 0; c < kLabel4Count; ++c) {
    rng.shuffle(std::span<std::size_t>(by_class[c]));
    counts[c] = by_class[c].size();
  }

  const std::size_t n = labels.size();
  const std::size_t train_target = std::min(n, rounded(static_cast<double>(n) * ratios.train));
  const std::size_t val_target = std::min(n - train_target, rounded(static_cast<double>(n) * ratios.validation));

  const auto train_alloc = apportion(counts, counts, ratios.train, train_target);
  std::vector<std::size_t> remaining(kLabel4Count);
  for (std::size_t c = 0; c < kLabel4Count; ++c) remaining[c] = counts[c] - train_alloc[c];
  const auto val_alloc = apportion(counts, remaining, ratios.validation, val_target);

  DatasetSplit out;
  out.seed = seed;
  for (std::size_t c = 0; c < kLabel4Count; ++c) {
    const auto& idx = by_class[c];
    const std::size_t a = train_alloc[c];
    const std::size_t b = a + val_alloc[c];
    out.train.insert(out.train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(a));
    out.validation.insert(out.validation.end(), idx.begin() + static_cast<std::ptrdiff_t>(a),
                          idx.begin() + static_cast<std::ptrdiff_t>(b));
    out.test.insert(out.test.end(), idx.begin() + static_cast<std::ptrdiff_t>(b), idx.end());
  }
  if (out.train.empty() || out.validation.empty() || out.test.empty())
    throw ConfigError("split produced an empty partition (" + std::to_string(n) + " samples)");
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.validation.begin(), out.validation.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

DatasetSplit split(std::span<const RawRecord> records, const SplitRatios& ratios, std::uint64_t seed) {
  std::vector<ClassLabel8> labels;
  labels.reserve(records.size());
  for (const auto& r : records) labels.push_back(r.label8);
  return split(labels, ratios, seed);
}

}  // namespace iiotsec::dataset
