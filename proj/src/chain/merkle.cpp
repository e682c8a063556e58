#include "iotledger/chain/merkle.hpp"

#include <string>

#include "iotledger/common/error.hpp"

namespace iotledger::chain {

Digest leaf_digest(const Transaction& tx) {
  Sha256 h;
  h.update(std::uint8_t{0x00});
  h.update(tx.encode());
  return h.finish();
}

Digest node_digest(const Digest& left, const Digest& right) {
  return Sha256{}.update(left.view()).update(right.view()).finish();
}

namespace {

std::vector<Digest> leaves_of(std::span<const Transaction> transactions) {
  std::vector<Digest> leaves;
  leaves.reserve(transactions.size());
  for (const auto& tx : transactions) leaves.push_back(leaf_digest(tx));
  return leaves;
}

std::vector<Digest> next_level(const std::vector<Digest>& level) {
  std::vector<Digest> up;
  up.reserve((level.size() + 1) / 2);
  for (std::size_t i = 0; i < level.size(); i += 2) {
    const Digest& right = i + 1 < level.size() ? level[i + 1] : level[i];
    up.push_back(node_digest(level[i], right));
  }
  return up;
}

}  // namespace

Digest merkle_root_of_leaves(std::vector<Digest> level) {
  if (level.empty()) throw Error(ErrorCode::EmptyBlock, "merkle root of an empty list");
  while (level.size() > 1) level = next_level(level);
  return level.front();
}

Digest merkle_root(std::span<const Transaction> transactions) {
  if (transactions.empty()) throw Error(ErrorCode::EmptyBlock, "merkle root of an empty list");
  return merkle_root_of_leaves(leaves_of(transactions));
}

Digest block_tx_root(std::span<const Transaction> transactions) {
  if (transactions.empty()) return Digest{};
  return merkle_root(transactions);
}

MerkleProof merkle_prove(std::span<const Transaction> transactions, std::uint64_t index) {
  if (index >= transactions.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "proof index " + std::to_string(index) + " of " + std::to_string(transactions.size()));
  }
  MerkleProof proof;
  proof.leaf_index = index;
  auto level = leaves_of(transactions);
  std::uint64_t pos = index;
  while (level.size() > 1) {
    if (pos % 2 == 0) {
      const Digest& sib = pos + 1 < level.size() ? level[pos + 1] : level[pos];
      proof.path.push_back({sib, Side::Right});
    } else {
      proof.path.push_back({level[pos - 1], Side::Left});
    }
    level = next_level(level);
    pos /= 2;
  }
  return proof;
}

bool verify_proof(const Digest& root, const Transaction& tx, const MerkleProof& proof) {
  if (proof.path.size() < 64 && (proof.leaf_index >> proof.path.size()) != 0) return false;
  Digest acc = leaf_digest(tx);
  std::uint64_t pos = proof.leaf_index;
  for (const auto& step : proof.path) {
    Side expected = (pos % 2 == 0) ? Side::Right : Side::Left;
    if (step.side != expected) return false;
    acc = step.side == Side::Right ? node_digest(acc, step.sibling) : node_digest(step.sibling, acc);
    pos /= 2;
  }
  return acc == root;
}

}  // namespace iotledger::chain
