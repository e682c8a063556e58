#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "iotledger/chain/transaction.hpp"

namespace iotledger::chain {

// Binary Merkle tree over transaction leaves.
//
//   leaf(tx)   = H(0x00 || encode(tx))
//   node(l, r) = H(l || r)
//
// A level with an odd number of nodes pairs its last node with itself.

enum class Side : std::uint8_t { Left = 0, Right = 1 };

struct ProofStep {
  Digest sibling;
  Side side = Side::Right;  // where the sibling sits relative to the running hash
  bool operator==(const ProofStep&) const = default;
};

struct MerkleProof {
  std::uint64_t leaf_index = 0;
  std::vector<ProofStep> path;
  bool operator==(const MerkleProof&) const = default;
};

Digest leaf_digest(const Transaction& tx);
Digest node_digest(const Digest& left, const Digest& right);

/// Throws EmptyBlock for an empty list.
Digest merkle_root(std::span<const Transaction> transactions);
Digest merkle_root_of_leaves(std::vector<Digest> leaves);

/// Header commitment for a block's transactions: the Merkle root, or the
/// all-zero digest when the block carries none.
Digest block_tx_root(std::span<const Transaction> transactions);

/// Throws IndexOutOfRange unless index < transactions.size().
MerkleProof merkle_prove(std::span<const Transaction> transactions, std::uint64_t index);

/// True iff folding tx's leaf through the path reproduces root. The sides in
/// the path must agree with the bits of leaf_index.
bool verify_proof(const Digest& root, const Transaction& tx, const MerkleProof& proof);

}  // namespace iotledger::chain
