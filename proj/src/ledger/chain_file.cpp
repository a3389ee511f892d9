#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "iiotsec/ledger/chain.hpp"

namespace iiotsec::ledger {

std::string block_to_line(const Block& b) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : b.records) records.push_back(record_to_json(r));
  const nlohmann::json doc = {{"index", b.index},
                              {"prev_hash", to_hex(b.prev_hash)},
                              {"timestamp", b.timestamp},
                              {"records", std::move(records)},
                              {"hash", to_hex(b.hash)}};
  return doc.dump();
}

Block block_from_line(std::string_view line) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("block line is not JSON: ") + e.what());
  }
  if (!doc.is_object()) throw DataError("block line is not an object");
  std::set<std::string> keys;
  for (const auto& [k, v] : doc.items()) keys.insert(k);
  if (keys != std::set<std::string>{"hash", "index", "prev_hash", "records", "timestamp"})
    throw DataError("block line has unexpected or missing keys");
  if (!doc["index"].is_number_unsigned() || !doc["timestamp"].is_number_integer() ||
      !doc["prev_hash"].is_string() || !doc["hash"].is_string() || !doc["records"].is_array())
    throw DataError("block line has mistyped fields");
  Block b;
  b.index = doc["index"].get<std::uint64_t>();
  b.timestamp = doc["timestamp"].get<std::int64_t>();
  auto prev = digest_from_hex(doc["prev_hash"].get<std::string>());
  auto hash = digest_from_hex(doc["hash"].get<std::string>());
  if (!prev || !hash) throw DataError("block line has a malformed digest");
  b.prev_hash = *prev;
  b.hash = *hash;
  for (const auto& r : doc["records"]) b.records.push_back(record_from_json(r));
  return b;
}

LoadedChain parse_chain_text(std::string_view text) {
  std::vector<Block> blocks;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) break;  // partial trailing append
    const auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    try {
      blocks.push_back(block_from_line(line));
    } catch (const DataError& e) {
      const std::size_t at = blocks.size();
      return {Chain::from_blocks(std::move(blocks)), ChainStatus::broken(at, e.what()), 0};
    }
  }
  Chain chain = Chain::from_blocks(std::move(blocks));
  ChainStatus status = validate_chain(chain);
  return {std::move(chain), std::move(status), text.size() - pos};
}

LoadedChain load_chain_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open chain file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_chain_text(buf.str());
}

void save_chain_file(const std::string& path, const Chain& chain) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw LedgerError("cannot write chain file: " + path);
  for (const auto& b : chain.blocks()) out << block_to_line(b) << '\n';
  out.flush();
  if (!out) throw LedgerError("write failed: " + path);
}

void append_block_line(const std::string& path, const Block& block) {
  const std::string line = block_to_line(block) + '\n';
  std::FILE* f = std::fopen(path.c_str(), "ab");
  if (!f) throw LedgerError("cannot open chain file for append: " + path);
  const bool ok = std::fwrite(line.data(), 1, line.size(), f) == line.size() && std::fflush(f) == 0;
  const bool closed = std::fclose(f) == 0;
  if (!ok || !closed) throw LedgerError("append to chain file failed: " + path);
}

}  // namespace iiotsec::ledger
