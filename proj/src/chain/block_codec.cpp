#include "iotledger/chain/block_codec.hpp"

#include "iotledger/common/error.hpp"

namespace iotledger::chain {

using nlohmann::json;

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::Malformed, what); }

const json& field(const json& obj, const char* key) {
  if (!obj.is_object()) malformed("expected object");
  auto it = obj.find(key);
  if (it == obj.end()) malformed(std::string("missing field '") + key + "'");
  return *it;
}

std::uint64_t as_u64(const json& j, const char* what) {
  if (!j.is_number_unsigned()) malformed(std::string(what) + ": expected unsigned integer");
  return j.get<std::uint64_t>();
}

std::string as_string(const json& j, const char* what) {
  if (!j.is_string()) malformed(std::string(what) + ": expected string");
  return j.get<std::string>();
}

template <class T>
T as_fixed(const json& j, const char* what) {
  std::string s = as_string(j, what);
  if (s.size() != 2 * T::kSize) malformed(std::string(what) + ": wrong length");
  return T::from_hex(s);
}

json seal_to_json(const Seal& seal) {
  json j;
  if (const auto* g = std::get_if<GenesisSeal>(&seal)) {
    j = {{"kind", "genesis"}, {"config_digest", g->config_digest.hex()}};
  } else if (const auto* p = std::get_if<PowSeal>(&seal)) {
    j = {{"kind", "pow"}, {"nonce", p->nonce}, {"threshold", p->threshold.hex()}};
  } else if (const auto* s = std::get_if<PosSeal>(&seal)) {
    j = {{"kind", "pos"},
         {"validator", s->validator.hex()},
         {"validator_key", s->validator_key.hex()},
         {"slot", s->slot},
         {"signature", s->signature.hex()}};
  } else {
    const auto& b = std::get<PbftSeal>(seal);
    json votes = json::array();
    for (const auto& v : b.votes) {
      votes.push_back(json::array(
          {v.validator.hex(), v.validator_key.hex(), v.proposal.hex(), v.signature.hex()}));
    }
    j = {{"kind", "pbft"}, {"view", b.view}, {"votes", votes}};
  }
  return j;
}

Seal seal_from_json(const json& j) {
  std::string kind = as_string(field(j, "kind"), "seal.kind");
  if (kind == "genesis") {
    return GenesisSeal{as_fixed<Digest>(field(j, "config_digest"), "seal.config_digest")};
  }
  if (kind == "pow") {
    return PowSeal{as_u64(field(j, "nonce"), "seal.nonce"),
                   U256::from_digest(as_fixed<Digest>(field(j, "threshold"), "seal.threshold"))};
  }
  if (kind == "pos") {
    return PosSeal{as_fixed<Address>(field(j, "validator"), "seal.validator"),
                   as_fixed<PublicKey>(field(j, "validator_key"), "seal.validator_key"),
                   as_u64(field(j, "slot"), "seal.slot"),
                   as_fixed<Signature>(field(j, "signature"), "seal.signature")};
  }
  if (kind == "pbft") {
    PbftSeal seal;
    seal.view = as_u64(field(j, "view"), "seal.view");
    const json& votes = field(j, "votes");
    if (!votes.is_array()) malformed("seal.votes: expected array");
    for (const auto& v : votes) {
      if (!v.is_array() || v.size() != 4) malformed("seal.votes: expected 4-element arrays");
      seal.votes.push_back(PbftVote{as_fixed<Address>(v[0], "vote.validator"),
                                    as_fixed<PublicKey>(v[1], "vote.validator_key"),
                                    as_fixed<Digest>(v[2], "vote.proposal"),
                                    as_fixed<Signature>(v[3], "vote.signature")});
    }
    return seal;
  }
  malformed("unknown seal kind '" + kind + "'");
}

}  // namespace

json transaction_to_json(const Transaction& tx) {
  return json::array({tx.sender.hex(), tx.sender_key.hex(), tx.nonce, tx.call.function,
                      tx.call.device_id.hex(), tx.call.filehash.hex(), tx.gas_used,
                      tx.signature.hex()});
}

Transaction transaction_from_json(const json& j) {
  if (!j.is_array() || j.size() != 8) malformed("transaction: expected 8-element array");
  Transaction tx;
  tx.sender = as_fixed<Address>(j[0], "tx.sender");
  tx.sender_key = as_fixed<PublicKey>(j[1], "tx.sender_key");
  tx.nonce = as_u64(j[2], "tx.nonce");
  tx.call.function = as_string(j[3], "tx.function");
  tx.call.device_id = as_fixed<Address>(j[4], "tx.device_id");
  tx.call.filehash = as_fixed<ChunkHandle>(j[5], "tx.filehash");
  tx.gas_used = as_u64(j[6], "tx.gas_used");
  tx.signature = as_fixed<Signature>(j[7], "tx.signature");
  return tx;
}

json header_to_json(const BlockHeader& header) {
  return {{"height", header.height},
          {"parent_hash", header.parent_hash.hex()},
          {"tx_root", header.tx_root.hex()},
          {"timestamp", header.timestamp},
          {"seal", seal_to_json(header.seal)},
          {"hash", hash_header(header).hex()}};
}

BlockHeader header_from_json(const json& j) {
  BlockHeader h;
  h.height = as_u64(field(j, "height"), "height");
  h.parent_hash = as_fixed<Digest>(field(j, "parent_hash"), "parent_hash");
  h.tx_root = as_fixed<Digest>(field(j, "tx_root"), "tx_root");
  h.timestamp = as_u64(field(j, "timestamp"), "timestamp");
  h.seal = seal_from_json(field(j, "seal"));
  return h;
}

json block_to_json(const Block& block) {
  json j = header_to_json(block.header);
  json txs = json::array();
  for (const auto& tx : block.transactions) txs.push_back(transaction_to_json(tx));
  j["transactions"] = std::move(txs);
  return j;
}

Block block_from_json(const json& j) {
  Block b;
  b.header = header_from_json(j);
  const json& txs = field(j, "transactions");
  if (!txs.is_array()) malformed("transactions: expected array");
  b.transactions.reserve(txs.size());
  for (const auto& t : txs) b.transactions.push_back(transaction_from_json(t));
  return b;
}

std::string block_to_line(const Block& block) { return block_to_json(block).dump(); }

Block block_from_line(const std::string& line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded()) malformed("block line is not valid JSON");
  return block_from_json(j);
}

}  // namespace iotledger::chain
