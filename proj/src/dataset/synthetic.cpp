#include "iiotsec/dataset/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "iiotsec/common/rng.hpp"

namespace iiotsec::dataset {
namespace {

constexpr std::size_t kMinConstantFeatures = 9;

// Rough per-column units so the raw data is not already in [0, 1].
constexpr std::array<double, 3> kScales = {1.0, 10.0, 100.0};

}  // namespace

void SyntheticConfig::add_group(ClassLabel4 group, std::size_t count) {
  switch (group) {
    case ClassLabel4::Normal: counts[ClassLabel8::Normal] += count; break;
    case ClassLabel4::DoS: counts[ClassLabel8::DoS] += count; break;
    case ClassLabel4::Recon: counts[ClassLabel8::Recon] += count; break;
    case ClassLabel4::Injection: {
      constexpr std::array<ClassLabel8, 5> sub = {ClassLabel8::NMRI, ClassLabel8::CMRI, ClassLabel8::MSCI,
                                                  ClassLabel8::MPCI, ClassLabel8::MFCI};
      for (std::size_t i = 0; i < sub.size(); ++i) {
        const std::size_t share = count / sub.size() + (i < count % sub.size() ? 1 : 0);
        counts[sub[i]] += share;
      }
      break;
    }
  }
}

std::size_t SyntheticConfig::total() const {
  std::size_t n = 0;
  for (const auto& [label, count] : counts) n += count;
  return n;
}

SyntheticConfig default_synthetic_config() {
  SyntheticConfig config;
  config.add_group(ClassLabel4::Normal, 700);
  config.add_group(ClassLabel4::Injection, 300);
  config.add_group(ClassLabel4::DoS, 100);
  config.add_group(ClassLabel4::Recon, 100);
  return config;
}

SyntheticConfig synthetic_config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("synthetic config must be an object");
  // Missing counts fall back to the default class mix.
  const auto counts = doc.contains("counts") ? doc["counts"] : synthetic_config_to_json(default_synthetic_config())["counts"];
  if (!counts.is_object()) throw ConfigError("synthetic \"counts\" must be an object");
  SyntheticConfig config;
  for (const auto& [name, value] : counts.items()) {
    if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<long long>() >= 0))
      throw ConfigError("synthetic count for '" + name + "' must be a non-negative integer");
    const auto count = value.get<std::size_t>();
    if (count == 0) throw ConfigError("synthetic class '" + name + "' has zero count");
    if (auto l8 = label8_from_name(name)) {
      config.counts[*l8] += count;
    } else if (auto l4 = label4_from_name(name)) {
      config.add_group(*l4, count);
    } else {
      throw ConfigError("unknown class name in synthetic config: " + name);
    }
  }
  try {
    if (doc.contains("constant_features"))
      config.constant_features = doc["constant_features"].get<std::vector<std::size_t>>();
    if (doc.contains("center_spread")) config.center_spread = doc["center_spread"].get<double>();
    if (doc.contains("noise_stddev")) config.noise_stddev = doc["noise_stddev"].get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed synthetic config: ") + e.what());
  }
  return config;
}

nlohmann::json synthetic_config_to_json(const SyntheticConfig& config) {
  nlohmann::json doc;
  doc["counts"] = nlohmann::json::object();
  for (const auto& [label, count] : config.counts) doc["counts"][std::string(label_name(label))] = count;
  doc["constant_features"] = config.constant_features;
  doc["center_spread"] = config.center_spread;
  doc["noise_stddev"] = config.noise_stddev;
  return doc;
}

std::vector<RawRecord> synthesize_dataset(const SyntheticConfig& config, std::uint64_t seed) {
  if (config.counts.empty()) throw ConfigError("synthetic config has no classes");
  for (const auto& [label, count] : config.counts)
    if (count == 0) throw ConfigError("synthetic class '" + std::string(label_name(label)) + "' has zero count");
  const std::set<std::size_t> constant(config.constant_features.begin(), config.constant_features.end());
  if (constant.size() < kMinConstantFeatures)
    throw ConfigError("synthetic config needs at least 9 distinct constant features");
  if (*constant.rbegin() >= kRawFeatureCount) throw ConfigError("constant feature index out of range");
  if (!(config.noise_stddev > 0.0) || !(config.center_spread > 0.0))
    throw ConfigError("synthetic noise_stddev and center_spread must be positive");

  Rng rng(seed);
  RawFeatures offsets{};
  for (std::size_t j = 0; j < kRawFeatureCount; ++j) offsets[j] = std::round(rng.uniform(0.0, 50.0));

  std::vector<RawRecord> records;
  records.reserve(config.total());
  for (const auto& [label, count] : config.counts) {
    RawFeatures center{};
    for (std::size_t j = 0; j < kRawFeatureCount; ++j)
      center[j] = constant.contains(j) ? 0.0 : rng.uniform(0.0, config.center_spread);
    for (std::size_t i = 0; i < count; ++i) {
      RawRecord r;
      r.label8 = label;
      for (std::size_t j = 0; j < kRawFeatureCount; ++j) {
        const double scale = kScales[j % kScales.size()];
        r.features[j] = constant.contains(j)
                            ? offsets[j]
                            : offsets[j] + scale * rng.normal(center[j], config.noise_stddev);
      }
      records.push_back(r);
    }
  }
  rng.shuffle(std::span<RawRecord>(records));
  return records;
}

}  // namespace iiotsec::dataset
