#include "iotledger/chain/chain_state.hpp"

#include <algorithm>

#include "iotledger/chain/merkle.hpp"
#include "iotledger/common/error.hpp"

namespace iotledger::chain {

std::string_view block_status_name(BlockStatus status) {
  switch (status) {
    case BlockStatus::Accepted: return "Accepted";
    case BlockStatus::AlreadyKnown: return "AlreadyKnown";
    case BlockStatus::UnknownParent: return "UnknownParent";
    case BlockStatus::BadHeight: return "BadHeight";
    case BlockStatus::BadTimestamp: return "BadTimestamp";
    case BlockStatus::BadTxRoot: return "BadTxRoot";
    case BlockStatus::BadSignature: return "BadSignature";
    case BlockStatus::StaleNonce: return "StaleNonce";
    case BlockStatus::GasLimitExceeded: return "GasLimitExceeded";
    case BlockStatus::BadSeal: return "BadSeal";
  }
  return "Unknown";
}

TipInfo select_head(std::span<const TipInfo> tips, bool forks_allowed) {
  if (tips.empty()) throw Error(ErrorCode::IndexOutOfRange, "select_head over no tips");
  if (!forks_allowed && tips.size() > 1) {
    throw Error(ErrorCode::FinalityBroken, std::to_string(tips.size()) + " tips under a final engine");
  }
  const TipInfo* best = &tips.front();
  for (const auto& tip : tips.subspan(1)) {
    if (tip.height > best->height || (tip.height == best->height && tip.hash < best->hash)) {
      best = &tip;
    }
  }
  return *best;
}

ChainState::ChainState(Block genesis, ChainParams params) : params_(params) {
  Digest hash = hash_header(genesis.header);
  auto [it, inserted] = entries_.emplace(hash, Entry{std::move(genesis), hash, {}});
  canonical_.push_back(&it->second);
  tips_.insert(hash);
}

const BlockHeader* ChainState::find_header(const Digest& hash) const {
  auto it = entries_.find(hash);
  return it == entries_.end() ? nullptr : &it->second.block.header;
}

const ChainState::Entry* ChainState::find(const Digest& hash) const {
  auto it = entries_.find(hash);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<TipInfo> ChainState::tips() const {
  std::vector<TipInfo> out;
  out.reserve(tips_.size());
  for (const auto& hash : tips_) out.push_back({entries_.at(hash).block.header.height, hash});
  return out;
}

const ChainState::Entry* ChainState::canonical_at(std::uint64_t height) const {
  return height < canonical_.size() ? canonical_[height] : nullptr;
}

bool ChainState::on_canonical(const Digest& hash) const {
  const Entry* e = find(hash);
  if (e == nullptr) return false;
  const Entry* c = canonical_at(e->block.header.height);
  return c == e;
}

std::optional<TxLocation> ChainState::locate_tx(const Digest& tx_id) const {
  auto it = tx_index_.find(tx_id);
  if (it == tx_index_.end()) return std::nullopt;
  return it->second;
}

BlockStatus ChainState::append_block(const Block& block, const SealVerifier& engine) {
  const BlockHeader& header = block.header;
  Digest hash = hash_header(header);
  if (entries_.count(hash) != 0) return BlockStatus::AlreadyKnown;

  auto parent_it = entries_.find(header.parent_hash);
  if (parent_it == entries_.end()) return BlockStatus::UnknownParent;
  const Entry& parent = parent_it->second;
  const BlockHeader& parent_header = parent.block.header;

  if (header.height != parent_header.height + 1) return BlockStatus::BadHeight;
  if (header.timestamp <= parent_header.timestamp) return BlockStatus::BadTimestamp;
  if (header.tx_root != block_tx_root(block.transactions)) return BlockStatus::BadTxRoot;

  for (const auto& tx : block.transactions) {
    if (!tx.signature_valid()) return BlockStatus::BadSignature;
  }

  std::uint64_t gas = 0;
  for (const auto& tx : block.transactions) {
    gas += tx.gas_used;
    if (gas > params_.block_gas_limit) return BlockStatus::GasLimitExceeded;
  }

  auto nonces = parent.nonces;
  for (const auto& tx : block.transactions) {
    auto [it, fresh] = nonces.try_emplace(tx.sender, tx.nonce);
    if (!fresh) {
      if (tx.nonce <= it->second) return BlockStatus::StaleNonce;
      it->second = tx.nonce;
    }
  }

  if (!engine.verify_seal(header, parent_header, *this)) return BlockStatus::BadSeal;

  if (!engine.allows_forks() && tips_.count(header.parent_hash) == 0) {
    throw Error(ErrorCode::FinalityBroken,
                "second block at height " + std::to_string(header.height) + " under " +
                    std::string(engine.name()));
  }

  entries_.emplace(hash, Entry{block, hash, std::move(nonces)});
  tips_.erase(header.parent_hash);
  tips_.insert(hash);

  auto all_tips = tips();
  TipInfo best = select_head(all_tips, engine.allows_forks());
  if (best.hash != head().hash) set_head(&entries_.at(best.hash));
  return BlockStatus::Accepted;
}

void ChainState::set_head(const Entry* new_head) {
  std::vector<const Entry*> branch;
  const Entry* cursor = new_head;
  while (!on_canonical(cursor->hash)) {
    branch.push_back(cursor);
    cursor = &entries_.at(cursor->block.header.parent_hash);
  }
  std::uint64_t fork_height = cursor->block.header.height;

  std::uint64_t disconnected = 0;
  while (canonical_.size() > fork_height + 1) {
    for (const auto& tx : canonical_.back()->block.transactions) tx_index_.erase(tx.id());
    canonical_.pop_back();
    ++disconnected;
  }
  if (disconnected > 0) {
    ++reorg_count_;
    max_reorg_depth_ = std::max(max_reorg_depth_, disconnected);
  }

  for (auto it = branch.rbegin(); it != branch.rend(); ++it) {
    const Entry* e = *it;
    canonical_.push_back(e);
    const auto& txs = e->block.transactions;
    for (std::uint64_t i = 0; i < txs.size(); ++i) {
      tx_index_[txs[i].id()] = TxLocation{e->block.header.height, i};
    }
  }
}

}  // namespace iotledger::chain
