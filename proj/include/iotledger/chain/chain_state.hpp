#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "iotledger/chain/block.hpp"

namespace iotledger::chain {

/// Read access to headers by digest; what seal verifiers see of the chain.
class HeaderLookup {
 public:
  virtual ~HeaderLookup() = default;
  virtual const BlockHeader* find_header(const Digest& hash) const = 0;
};

/// Implemented by each consensus engine.
class SealVerifier {
 public:
  virtual ~SealVerifier() = default;
  virtual std::string_view name() const = 0;
  /// False for engines with immediate finality; the chain then refuses to
  /// hold more than one tip.
  virtual bool allows_forks() const = 0;
  virtual bool verify_seal(const BlockHeader& header, const BlockHeader& parent,
                           const HeaderLookup& chain) const = 0;
};

enum class BlockStatus {
  Accepted,
  AlreadyKnown,
  UnknownParent,
  BadHeight,
  BadTimestamp,
  BadTxRoot,
  BadSignature,
  StaleNonce,
  GasLimitExceeded,
  BadSeal,
};

std::string_view block_status_name(BlockStatus status);

struct ChainParams {
  std::uint64_t block_gas_limit = 0;
};

struct TxLocation {
  std::uint64_t height = 0;
  std::uint64_t index = 0;
};

struct TipInfo {
  std::uint64_t height = 0;
  Digest hash;
};

/// Fork choice: greatest height, ties broken by the lowest header digest.
/// With forks disallowed, more than one tip throws FinalityBroken.
TipInfo select_head(std::span<const TipInfo> tips, bool forks_allowed = true);

/// A validating block tree with a tracked canonical branch.
///
/// Single owner; append_block must be externally serialised.
class ChainState : public HeaderLookup {
 public:
  struct Entry {
    Block block;
    Digest hash;
    // Highest nonce seen per sender along the branch ending here.
    std::map<Address, std::uint64_t> nonces;
  };

  ChainState(Block genesis, ChainParams params);

  /// Validates and stores `block`. Any status other than Accepted leaves the
  /// state untouched. Under a no-fork engine a block that would open a second
  /// tip throws FinalityBroken, also without mutating.
  BlockStatus append_block(const Block& block, const SealVerifier& engine);

  const BlockHeader* find_header(const Digest& hash) const override;
  const Entry* find(const Digest& hash) const;
  bool contains(const Digest& hash) const { return entries_.count(hash) != 0; }

  const Entry& genesis() const { return *canonical_.front(); }
  const Entry& head() const { return *canonical_.back(); }
  std::uint64_t height() const { return head().block.header.height; }
  const ChainParams& params() const { return params_; }

  std::vector<TipInfo> tips() const;
  std::size_t block_count() const { return entries_.size(); }

  /// Canonical branch, genesis first.
  std::span<const Entry* const> canonical() const { return canonical_; }
  const Entry* canonical_at(std::uint64_t height) const;
  bool on_canonical(const Digest& hash) const;

  std::optional<TxLocation> locate_tx(const Digest& tx_id) const;
  bool includes_tx(const Digest& tx_id) const { return tx_index_.count(tx_id) != 0; }

  /// Number of head switches that disconnected at least one block, and the
  /// deepest such switch.
  std::uint64_t reorg_count() const { return reorg_count_; }
  std::uint64_t max_reorg_depth() const { return max_reorg_depth_; }

 private:
  void set_head(const Entry* new_head);

  ChainParams params_;
  std::unordered_map<Digest, Entry> entries_;
  std::set<Digest> tips_;
  std::vector<const Entry*> canonical_;
  std::unordered_map<Digest, TxLocation> tx_index_;
  std::uint64_t reorg_count_ = 0;
  std::uint64_t max_reorg_depth_ = 0;
};

inline BlockStatus append_block(ChainState& state, const Block& block, const SealVerifier& engine) {
  return state.append_block(block, engine);
}

}  // namespace iotledger::chain
