#include "iiotsec/sdn/ids.hpp"

#include <cmath>

#include "iiotsec/common/error.hpp"

namespace iiotsec::sdn {

CnnPayloadClassifier::CnnPayloadClassifier(nn::ModelArtifact artifact) : artifact_(std::move(artifact)) {
  const auto& cfg = artifact_.model.config();
  if (!cfg.binary() && cfg.num_classes() != 4)
    throw ConfigError("IDS model must have a binary or a four-class head");
  if (artifact_.kept_indices.size() != cfg.input_length)
    throw ConfigError("IDS model input length does not match its feature selection");
}

IdsVerdict CnnPayloadClassifier::classify(std::span<const double> raw) const {
  const auto x = artifact_.preprocess(raw);
  const std::size_t label = artifact_.model.predict(x);
  IdsVerdict v;
  if (artifact_.model.config().binary()) {
    v.malicious = label == 1;
  } else {
    v.category = dataset::label4_from_int(static_cast<int>(label));
    if (!v.category) throw StateError("IDS model produced an unknown class");
    v.malicious = *v.category != dataset::ClassLabel4::Normal;
  }
  return v;
}

IdsVerdict IdsApplication::classify(const Payload& payload) const {
  if (!classifier_) throw StateError("IDS model not loaded");
  const auto* reading = std::get_if<std::vector<double>>(&payload);
  bool ok = reading && reading->size() == dataset::kRawFeatureCount;
  if (ok)
    for (double v : *reading)
      if (!std::isfinite(v)) ok = false;
  if (!ok) return {true, std::nullopt, false};
  return classifier_->classify(*reading);
}

}  // namespace iiotsec::sdn
