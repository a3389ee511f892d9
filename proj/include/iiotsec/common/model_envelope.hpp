#pragma once

#include <string_view>

#include "json.hpp"

namespace iiotsec {

inline constexpr int kModelFormatVersion = 1;

/// Every persisted model shares this envelope: {"version": 1, "kind": ...}.
nlohmann::json make_model_envelope(std::string_view kind);

/// Throws DataError if the document lacks a supported version or has a
/// different kind.
void check_model_envelope(const nlohmann::json& doc, std::string_view expected_kind);

/// Reads the "kind" field of a model document, validating the version.
std::string model_kind(const nlohmann::json& doc);

}  // namespace iiotsec
