#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "iiotsec/common/error.hpp"
#include "iiotsec/flow/flow_rule.hpp"

namespace iiotsec::ledger {

using Digest = std::array<std::uint8_t, 32>;

Digest sha256(std::string_view bytes);
/// Lowercase hex.
std::string to_hex(const Digest& d);
/// Accepts exactly 64 lowercase hex characters.
std::optional<Digest> digest_from_hex(std::string_view hex);

/// A flow rule as published to the chain, with the switch it was sent to.
struct FlowRuleRecord {
  flow::FlowRule rule;
  std::string switch_id;

  friend bool operator==(const FlowRuleRecord&, const FlowRuleRecord&) = default;
};

/// Flat object {"action", "issued_at", "match", "rule_id", "switch_id"}.
nlohmann::json record_to_json(const FlowRuleRecord& r);
FlowRuleRecord record_from_json(const nlohmann::json& doc);
/// Byte-stable serialization: sorted keys, no whitespace, integer fields only.
std::string canonical(const FlowRuleRecord& r);
std::string canonical(std::span<const FlowRuleRecord> records);

// Genesis block constants.
inline constexpr std::uint64_t kGenesisIndex = 0;
inline constexpr std::int64_t kGenesisTimestamp = 0;
inline constexpr Digest kZeroDigest{};

struct Block {
  std::uint64_t index = 0;
  Digest prev_hash{};
  std::int64_t timestamp = 0;
  std::vector<FlowRuleRecord> records;
  Digest hash{};

  friend bool operator==(const Block&, const Block&) = default;
};

/// SHA-256 over "iiotsec-block-v1|<index>|<prev_hash hex>|<timestamp>|<canonical records>".
Digest compute_block_hash(std::uint64_t index, const Digest& prev_hash, std::int64_t timestamp,
                          std::span<const FlowRuleRecord> records);
Block make_genesis();

enum class NodeRole { Generator, DetectionNode };

class RoleViolation : public Error {
 public:
  using Error::Error;
};

class LedgerError : public Error {
 public:
  using Error::Error;
};

struct ChainStatus {
  std::optional<std::size_t> broken_at;  // position of the first inconsistent block
  std::string reason;

  bool valid() const noexcept { return !broken_at.has_value(); }
  static ChainStatus ok() { return {}; }
  static ChainStatus broken(std::size_t at, std::string why) { return {at, std::move(why)}; }

  friend bool operator==(const ChainStatus&, const ChainStatus&) = default;
};

/// Append-only hash-linked block list. A fresh chain holds only genesis.
class Chain {
 public:
  Chain();

  /// Wraps blocks as-is, without validation (used when loading or inspecting
  /// possibly tampered data).
  static Chain from_blocks(std::vector<Block> blocks);

  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  std::size_t size() const noexcept { return blocks_.size(); }
  const Block& tip() const { return blocks_.back(); }

 private:
  friend const Block& commit_block(Chain&, Block);
  std::vector<Block> blocks_;
};

/// Links a new block to the tip. Throws RoleViolation for a DetectionNode and
/// ConfigError for an empty record list.
const Block& append_block(Chain& chain, std::vector<FlowRuleRecord> records, NodeRole role, std::int64_t timestamp);

/// The two halves of append_block, for callers that persist the block before
/// it becomes visible in memory.
Block prepare_block(const Chain& chain, std::vector<FlowRuleRecord> records, NodeRole role, std::int64_t timestamp);
/// Throws LedgerError unless `block` links to the current tip.
const Block& commit_block(Chain& chain, Block block);

/// Recomputes every hash and link; reports the first inconsistent position.
ChainStatus validate_chain(const Chain& chain);

/// Records of blocks [from_index, tip] in append order. Throws LedgerError if
/// the chain is not valid or from_index is past the tip.
std::vector<FlowRuleRecord> read_rules(const Chain& chain, std::size_t from_index = 0);

// JSON-lines persistence: one block per line.
std::string block_to_line(const Block& block);
/// Throws DataError if the line is not a well-formed block.
Block block_from_line(std::string_view line);

struct LoadedChain {
  Chain chain;
  ChainStatus status;
  std::size_t ignored_tail_bytes = 0;  // unterminated last line, if any
};

/// Parses chain text. A malformed line ends the parse and is reported as
/// Broken at that position; a trailing line without '\n' is an incomplete
/// append and is ignored.
LoadedChain parse_chain_text(std::string_view text);
LoadedChain load_chain_file(const std::string& path);
void save_chain_file(const std::string& path, const Chain& chain);
/// Appends one line with a single write and flush. Throws LedgerError on
/// I/O failure.
void append_block_line(const std::string& path, const Block& block);

}  // namespace iiotsec::ledger
