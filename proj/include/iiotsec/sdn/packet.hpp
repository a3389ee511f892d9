#pragma once

#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "iiotsec/flow/flow_rule.hpp"

namespace iiotsec::sdn {

/// Bytes that do not decode as a SCADA reading.
struct OpaquePayload {
  std::string bytes;
  friend bool operator==(const OpaquePayload&, const OpaquePayload&) = default;
};

/// A raw (pre-normalization) 27-attribute reading, or opaque bytes.
using Payload = std::variant<std::vector<double>, OpaquePayload>;

struct Packet {
  flow::PacketHeader header;
  Payload payload;
};

nlohmann::json header_to_json(const flow::PacketHeader& h);

}  // namespace iiotsec::sdn
