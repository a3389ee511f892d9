#pragma once

#include <memory>
#include <optional>

#include "iiotsec/dataset/records.hpp"
#include "iiotsec/nn/serialization.hpp"
#include "iiotsec/sdn/packet.hpp"

namespace iiotsec::sdn {

struct IdsVerdict {
  bool malicious = false;
  std::optional<dataset::ClassLabel4> category;  // multiclass models only
  bool parsed = true;                            // false: payload was not a reading

  int value() const noexcept { return malicious ? 1 : 0; }
};

class PayloadClassifier {
 public:
  virtual ~PayloadClassifier() = default;
  /// `raw` is a 27-attribute reading with finite values.
  virtual IdsVerdict classify(std::span<const double> raw) const = 0;
};

/// Binary head: p >= 0.5 is malicious. Four-class head: argmax, malicious
/// unless Normal.
class CnnPayloadClassifier : public PayloadClassifier {
 public:
  explicit CnnPayloadClassifier(nn::ModelArtifact artifact);
  IdsVerdict classify(std::span<const double> raw) const override;
  const nn::ModelArtifact& artifact() const noexcept { return artifact_; }

 private:
  nn::ModelArtifact artifact_;
};

/// The controller's IDS application.
class IdsApplication {
 public:
  void load(std::shared_ptr<const PayloadClassifier> classifier) { classifier_ = std::move(classifier); }
  bool loaded() const noexcept { return classifier_ != nullptr; }

  /// Payloads that are not a finite 27-value reading are malicious with no
  /// category. Throws StateError if no model is loaded.
  IdsVerdict classify(const Payload& payload) const;

 private:
  std::shared_ptr<const PayloadClassifier> classifier_;
};

inline IdsVerdict ids_classify(const IdsApplication& ids, const Payload& payload) { return ids.classify(payload); }

}  // namespace iiotsec::sdn
