#pragma once

#include <cstdint>
#include <map>

#include "iotledger/chain/chain_state.hpp"

namespace iotledger::consensus {

/// Stake per validator, iterated in address order.
using StakeTable = std::map<Address, std::uint64_t>;

std::uint64_t total_stake(const StakeTable& stakes);

/// Stake-weighted draw: address a wins with probability stake(a) / total over
/// uniformly random seeds. Deterministic in `seed`. Throws ZeroTotalStake.
Address pos_select(const StakeTable& stakes, const Digest& seed);

/// Draw seed for a slot built on `parent_hash`. There is no randomness beacon;
/// the chain seed comes from the scenario.
Digest pos_draw_seed(const Digest& chain_seed, const Digest& parent_hash, std::uint64_t slot);

struct PosConfig {
  StakeTable stakes;
  Digest chain_seed;
  std::uint64_t slot_interval_s = 14;
  std::uint64_t genesis_timestamp = 0;
};

/// Fills in the PoS seal for `header` (whose unsealed fields must be final).
void seal_pos_block(chain::BlockHeader& header, const KeyPair& validator, std::uint64_t slot);

class PosEngine final : public chain::SealVerifier {
 public:
  explicit PosEngine(PosConfig config) : config_(std::move(config)) {}

  std::string_view name() const override { return "pos"; }
  bool allows_forks() const override { return true; }
  bool verify_seal(const chain::BlockHeader& header, const chain::BlockHeader& parent,
                   const chain::HeaderLookup& chain) const override;

  Address leader(const Digest& parent_hash, std::uint64_t slot) const;
  std::uint64_t slot_timestamp(std::uint64_t slot) const {
    return config_.genesis_timestamp + slot * config_.slot_interval_s;
  }
  const PosConfig& config() const { return config_; }

 private:
  PosConfig config_;
};

}  // namespace iotledger::consensus
