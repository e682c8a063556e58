#include "iotledger/lpwan/clients.hpp"

#include "iotledger/common/error.hpp"

namespace iotledger::lpwan {

void BlockchainServer::register_client(const PublicKey& key) {
  clients_.try_emplace(address_of(key), ClientRecord{key, 0});
}

chain::Transaction BlockchainServer::prepare(const Address& client, chain::RegistryCall call) const {
  auto it = clients_.find(client);
  if (it == clients_.end()) throw Error(ErrorCode::NotFound, "unregistered client " + client.hex());
  chain::Transaction tx;
  tx.sender = client;
  tx.sender_key = it->second.key;
  tx.nonce = it->second.next_nonce;
  tx.call = std::move(call);
  tx.gas_used = per_tx_gas_;
  return tx;
}

void BlockchainServer::mark_submitted(const Address& client) { ++clients_.at(client).next_nonce; }

chain::Transaction server_trusting_submit(BlockchainServer& server, const EndDevice& client,
                                          chain::RegistryCall call, registry::Mempool& mempool) {
  chain::Transaction tx = server.prepare(client.id(), std::move(call));
  client.approve_and_sign(tx);
  server.mark_submitted(client.id());
  mempool.submit(tx);
  return tx;
}

std::vector<chain::BlockHeader> FullNodeService::headers_from(std::uint64_t height) const {
  std::vector<chain::BlockHeader> out;
  auto canonical = chain_.canonical();
  for (std::uint64_t h = height; h < canonical.size(); ++h) out.push_back(canonical[h]->block.header);
  return out;
}

std::optional<InclusionProof> FullNodeService::prove_inclusion(const Digest& tx_id) const {
  auto loc = chain_.locate_tx(tx_id);
  if (!loc) return std::nullopt;
  const auto* entry = chain_.canonical_at(loc->height);
  const auto& txs = entry->block.transactions;
  return InclusionProof{entry->hash, txs[loc->index], chain::merkle_prove(txs, loc->index)};
}

std::string_view confirmation_name(Confirmation c) {
  switch (c) {
    case Confirmation::Confirmed: return "confirmed";
    case Confirmation::NotIncluded: return "not-included";
    case Confirmation::ProofInvalid: return "proof-invalid";
  }
  return "?";
}

ThinClient::ThinClient(chain::BlockHeader genesis) {
  by_hash_.emplace(chain::hash_header(genesis), 0);
  headers_.push_back(std::move(genesis));
}

const chain::BlockHeader* ThinClient::find_header(const Digest& hash) const {
  auto it = by_hash_.find(hash);
  return it == by_hash_.end() ? nullptr : &headers_[it->second];
}

bool ThinClient::sync_headers(const FullNodeApi& node, const chain::SealVerifier* engine) {
  // Re-fetch from height 1 when our tip is no longer on the node's branch.
  std::uint64_t from = headers_.size();
  auto batch = node.headers_from(from - 1);
  if (batch.empty() || chain::hash_header(batch.front()) != chain::hash_header(headers_.back())) {
    from = 1;
    batch = node.headers_from(0);
    if (batch.empty() || chain::hash_header(batch.front()) != chain::hash_header(headers_.front())) return false;
  }

  std::vector<chain::BlockHeader> candidate(headers_.begin(), headers_.begin() + static_cast<std::ptrdiff_t>(from));
  std::unordered_map<Digest, std::uint64_t> index;
  for (std::uint64_t i = 0; i < candidate.size(); ++i) index.emplace(chain::hash_header(candidate[i]), i);

  struct Lookup : chain::HeaderLookup {
    const std::vector<chain::BlockHeader>* headers;
    const std::unordered_map<Digest, std::uint64_t>* index;
    const chain::BlockHeader* find_header(const Digest& h) const override {
      auto it = index->find(h);
      return it == index->end() ? nullptr : &(*headers)[it->second];
    }
  } lookup;
  lookup.headers = &candidate;
  lookup.index = &index;

  for (std::size_t i = 1; i < batch.size(); ++i) {
    const auto& parent = candidate.back();
    const auto& h = batch[i];
    if (h.parent_hash != chain::hash_header(parent) || h.height != parent.height + 1 ||
        h.timestamp <= parent.timestamp) {
      return false;
    }
    if (engine != nullptr && !engine->verify_seal(h, parent, lookup)) return false;
    candidate.push_back(h);
    index.emplace(chain::hash_header(h), candidate.size() - 1);
  }
  headers_ = std::move(candidate);
  by_hash_ = std::move(index);
  return true;
}

Confirmation ThinClient::confirm(const Digest& tx_id, const FullNodeApi& node) const {
  auto proof = node.prove_inclusion(tx_id);
  if (!proof) return Confirmation::NotIncluded;
  if (proof->tx.id() != tx_id) return Confirmation::ProofInvalid;
  const chain::BlockHeader* header = find_header(proof->block_hash);
  if (header == nullptr) return Confirmation::ProofInvalid;
  if (!chain::verify_proof(header->tx_root, proof->tx, proof->proof)) return Confirmation::ProofInvalid;
  return Confirmation::Confirmed;
}

std::size_t ThinClient::state_bytes() const {
  std::size_t n = 0;
  for (const auto& h : headers_) n += chain::unsealed_header_bytes(h).size() + chain::encode_seal(h.seal).size();
  return n;
}

}  // namespace iotledger::lpwan
