#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "iotledger/chain/chain_state.hpp"

namespace iotledger::consensus {

struct Validator {
  Address address;
  PublicKey key;
};

/// Known validator set of size n tolerating f faults; requires n >= 3f + 1.
class PbftConfig {
 public:
  /// Throws InvalidPbftConfig on an empty or duplicated set or n < 3f + 1.
  PbftConfig(std::vector<Validator> validators, std::uint64_t f);

  const std::vector<Validator>& validators() const { return validators_; }
  std::uint64_t size() const { return validators_.size(); }
  std::uint64_t f() const { return f_; }
  std::optional<std::size_t> index_of(const Address& a) const;

  /// Round-robin proposer; each view change moves to the next validator.
  const Validator& proposer(std::uint64_t height, std::uint64_t view) const {
    return validators_[(height + view) % validators_.size()];
  }

 private:
  std::vector<Validator> validators_;
  std::uint64_t f_;
};

/// 2f + 1.
std::uint64_t quorum_size(const PbftConfig& config);

chain::PbftVote make_vote(const KeyPair& validator, const Digest& proposal);

/// Commit certificate iff at least a quorum of correctly signed votes name
/// `proposal`. Throws UnknownValidator for a voter outside the set and
/// DuplicateVoter when a validator appears twice.
std::optional<chain::PbftSeal> pbft_decide(const PbftConfig& config, const Digest& proposal,
                                           std::span<const chain::PbftVote> votes, std::uint64_t view = 0);

class PbftEngine final : public chain::SealVerifier {
 public:
  explicit PbftEngine(PbftConfig config) : config_(std::move(config)) {}

  std::string_view name() const override { return "pbft"; }
  bool allows_forks() const override { return false; }
  bool verify_seal(const chain::BlockHeader& header, const chain::BlockHeader& parent,
                   const chain::HeaderLookup& chain) const override;

  const PbftConfig& config() const { return config_; }

 private:
  PbftConfig config_;
};

}  // namespace iotledger::consensus
