#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "iotledger/chain/chain_state.hpp"
#include "iotledger/chain/merkle.hpp"
#include "iotledger/lpwan/device.hpp"
#include "iotledger/registry/gas.hpp"

namespace iotledger::lpwan {

// --- Server-trusting clients -------------------------------------------------

/// Server side of the server-trusting model: it knows each client only by
/// public key, tracks their nonces and prepares transactions, but has no way
/// to sign on their behalf.
class BlockchainServer {
 public:
  explicit BlockchainServer(std::uint64_t per_tx_gas = registry::kDefaultTxGas) : per_tx_gas_(per_tx_gas) {}

  void register_client(const PublicKey& key);
  bool knows(const Address& client) const { return clients_.count(client) != 0; }

  /// Unsigned transaction carrying the client's next nonce. Throws NotFound
  /// for an unregistered client.
  chain::Transaction prepare(const Address& client, chain::RegistryCall call) const;
  void mark_submitted(const Address& client);

 private:
  struct ClientRecord {
    PublicKey key;
    std::uint64_t next_nonce = 0;
  };
  std::map<Address, ClientRecord> clients_;
  std::uint64_t per_tx_gas_;
};

/// Server prepares, device signs, server enqueues. ClientRefused propagates
/// and leaves the mempool untouched.
chain::Transaction server_trusting_submit(BlockchainServer& server, const EndDevice& client,
                                          chain::RegistryCall call, registry::Mempool& mempool);

// --- Thin clients ------------------------------------------------------------

struct InclusionProof {
  Digest block_hash;
  chain::Transaction tx;
  chain::MerkleProof proof;
};

/// What a thin client asks of a full node.
class FullNodeApi {
 public:
  virtual ~FullNodeApi() = default;
  /// Canonical headers from `height` up to the node's head.
  virtual std::vector<chain::BlockHeader> headers_from(std::uint64_t height) const = 0;
  virtual std::optional<InclusionProof> prove_inclusion(const Digest& tx_id) const = 0;
};

/// Honest full node over a validated chain.
class FullNodeService : public FullNodeApi {
 public:
  explicit FullNodeService(const chain::ChainState& chain) : chain_(chain) {}
  std::vector<chain::BlockHeader> headers_from(std::uint64_t height) const override;
  std::optional<InclusionProof> prove_inclusion(const Digest& tx_id) const override;

 private:
  const chain::ChainState& chain_;
};

enum class Confirmation { Confirmed, NotIncluded, ProofInvalid };
std::string_view confirmation_name(Confirmation c);

/// Headers-only client. It never stores a transaction body.
class ThinClient : public chain::HeaderLookup {
 public:
  explicit ThinClient(chain::BlockHeader genesis);

  /// Pulls headers from `node`, replacing any divergent suffix. Every header
  /// must link to its predecessor; when `engine` is given its seal is checked
  /// too. Returns false (keeping the old headers) if the batch does not link.
  bool sync_headers(const FullNodeApi& node, const chain::SealVerifier* engine = nullptr);

  Confirmation confirm(const Digest& tx_id, const FullNodeApi& node) const;

  const chain::BlockHeader* find_header(const Digest& hash) const override;
  std::size_t header_count() const { return headers_.size(); }
  std::size_t transaction_count() const { return 0; }
  std::size_t state_bytes() const;
  const chain::BlockHeader& tip() const { return headers_.back(); }

 private:
  std::vector<chain::BlockHeader> headers_;
  std::unordered_map<Digest, std::uint64_t> by_hash_;
};

inline Confirmation thin_client_confirm(const ThinClient& client, const Digest& tx_id, const FullNodeApi& node) {
  return client.confirm(tx_id, node);
}

}  // namespace iotledger::lpwan
