#include "iiotsec/common/model_envelope.hpp"

#include <string>

#include "iiotsec/common/error.hpp"

namespace iiotsec {

nlohmann::json make_model_envelope(std::string_view kind) {
  nlohmann::json doc;
  doc["version"] = kModelFormatVersion;
  doc["kind"] = std::string(kind);
  return doc;
}

std::string model_kind(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("version"))
    throw DataError("model document has no version field");
  if (!doc["version"].is_number_integer() || doc["version"].get<int>() != kModelFormatVersion)
    throw DataError("unsupported model format version: " + doc["version"].dump());
  if (!doc.contains("kind") || !doc["kind"].is_string())
    throw DataError("model document has no kind field");
  return doc["kind"].get<std::string>();
}

void check_model_envelope(const nlohmann::json& doc, std::string_view expected_kind) {
  const std::string kind = model_kind(doc);
  if (kind != expected_kind)
    throw DataError("expected a '" + std::string(expected_kind) + "' model, found '" + kind + "'");
}

}  // namespace iiotsec
