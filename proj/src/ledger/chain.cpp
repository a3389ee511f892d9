#include "iiotsec/ledger/chain.hpp"

#include <openssl/evp.h>

namespace iiotsec::ledger {

Digest sha256(std::string_view bytes) {
  Digest d{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), d.data(), &len, EVP_sha256(), nullptr) != 1 || len != d.size())
    throw LedgerError("SHA-256 computation failed");
  return d;
}

std::string to_hex(const Digest& d) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(d.size() * 2);
  for (auto b : d) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0x0f]);
  }
  return out;
}

std::optional<Digest> digest_from_hex(std::string_view hex) {
  if (hex.size() != 64) return std::nullopt;
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
  };
  Digest d{};
  for (std::size_t i = 0; i < d.size(); ++i) {
    const int hi = nibble(hex[2 * i]), lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    d[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return d;
}

nlohmann::json record_to_json(const FlowRuleRecord& r) {
  nlohmann::json doc = flow::rule_to_json(r.rule);
  doc["switch_id"] = r.switch_id;
  return doc;
}

FlowRuleRecord record_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("switch_id") || !doc["switch_id"].is_string())
    throw DataError("flow rule record: missing switch_id");
  nlohmann::json rule = doc;
  rule.erase("switch_id");
  return {flow::rule_from_json(rule), doc["switch_id"].get<std::string>()};
}

std::string canonical(const FlowRuleRecord& r) { return record_to_json(r).dump(); }

std::string canonical(std::span<const FlowRuleRecord> records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) arr.push_back(record_to_json(r));
  return arr.dump();
}

Digest compute_block_hash(std::uint64_t index, const Digest& prev_hash, std::int64_t timestamp,
                          std::span<const FlowRuleRecord> records) {
  std::string preimage = "iiotsec-block-v1|";
  preimage += std::to_string(index);
  preimage += '|';
  preimage += to_hex(prev_hash);
  preimage += '|';
  preimage += std::to_string(timestamp);
  preimage += '|';
  preimage += canonical(records);
  return sha256(preimage);
}

Block make_genesis() {
  Block g;
  g.index = kGenesisIndex;
  g.prev_hash = kZeroDigest;
  g.timestamp = kGenesisTimestamp;
  g.hash = compute_block_hash(g.index, g.prev_hash, g.timestamp, g.records);
  return g;
}

Chain::Chain() { blocks_.push_back(make_genesis()); }

Chain Chain::from_blocks(std::vector<Block> blocks) {
  Chain c;
  c.blocks_ = std::move(blocks);
  return c;
}

Block prepare_block(const Chain& chain, std::vector<FlowRuleRecord> records, NodeRole role, std::int64_t timestamp) {
  if (role != NodeRole::Generator) throw RoleViolation("only the block generator may append to the chain");
  if (records.empty()) throw ConfigError("append_block: empty record list");
  if (chain.blocks().empty()) throw LedgerError("append_block: chain has no genesis block");
  Block b;
  b.index = chain.tip().index + 1;
  b.prev_hash = chain.tip().hash;
  b.timestamp = timestamp;
  b.records = std::move(records);
  b.hash = compute_block_hash(b.index, b.prev_hash, b.timestamp, b.records);
  return b;
}

const Block& commit_block(Chain& chain, Block block) {
  if (chain.blocks_.empty() || block.index != chain.tip().index + 1 || block.prev_hash != chain.tip().hash)
    throw LedgerError("commit_block: block does not extend the current tip");
  chain.blocks_.push_back(std::move(block));
  return chain.blocks_.back();
}

const Block& append_block(Chain& chain, std::vector<FlowRuleRecord> records, NodeRole role, std::int64_t timestamp) {
  return commit_block(chain, prepare_block(chain, std::move(records), role, timestamp));
}

ChainStatus validate_chain(const Chain& chain) {
  const auto& blocks = chain.blocks();
  if (blocks.empty()) return ChainStatus::broken(0, "missing genesis block");
  const Block& g = blocks.front();
  if (g.index != kGenesisIndex || g.prev_hash != kZeroDigest || g.timestamp != kGenesisTimestamp ||
      !g.records.empty())
    return ChainStatus::broken(0, "genesis block does not match the genesis constants");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Block& b = blocks[i];
    if (b.index != i) return ChainStatus::broken(i, "block index " + std::to_string(b.index) + " at position " + std::to_string(i));
    if (i > 0 && b.prev_hash != blocks[i - 1].hash) return ChainStatus::broken(i, "prev_hash does not link to the previous block");
    if (i > 0 && b.records.empty()) return ChainStatus::broken(i, "non-genesis block without records");
    if (compute_block_hash(b.index, b.prev_hash, b.timestamp, b.records) != b.hash)
      return ChainStatus::broken(i, "block hash does not match its contents");
  }
  return ChainStatus::ok();
}

std::vector<FlowRuleRecord> read_rules(const Chain& chain, std::size_t from_index) {
  if (const auto status = validate_chain(chain); !status.valid())
    throw LedgerError("refusing to read a broken chain (block " + std::to_string(*status.broken_at) +
                      "): " + status.reason);
  if (from_index >= chain.size())
    throw LedgerError("read_rules: from_index " + std::to_string(from_index) + " is past the tip");
  std::vector<FlowRuleRecord> out;
  for (std::size_t i = from_index; i < chain.size(); ++i)
    out.insert(out.end(), chain.blocks()[i].records.begin(), chain.blocks()[i].records.end());
  return out;
}

}  // namespace iiotsec::ledger
