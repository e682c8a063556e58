#pragma once

#include <cstdint>
#include <optional>

#include "iotledger/chain/chain_state.hpp"
#include "iotledger/consensus/difficulty.hpp"

namespace iotledger::consensus {

/// H(unsealed header bytes || nonce), one hash invocation.
Digest pow_hash(const chain::BlockHeader& header, std::uint64_t nonce);

/// Process-wide count of pow_hash calls, for asserting verification cost.
std::uint64_t pow_hash_invocations();

struct PowSearch {
  std::optional<std::uint64_t> nonce;  // empty when the budget ran out
  std::uint64_t attempts = 0;
  std::uint64_t next_nonce = 0;  // where a continued search should resume
};

/// Tries nonces start_nonce, start_nonce + 1, ... (wrapping) until one hashes
/// below the threshold or `attempt_budget` attempts have been made.
PowSearch pow_seal(const chain::BlockHeader& header, const Difficulty& difficulty,
                   std::uint64_t attempt_budget, std::uint64_t start_nonce);

bool pow_verify(const chain::BlockHeader& header, const chain::PowSeal& seal, const Difficulty& difficulty);

struct PowConfig {
  Difficulty initial{U256::max()};
  std::uint64_t target_interval_s = 14;
  RetargetPolicy policy;
};

class PowEngine final : public chain::SealVerifier {
 public:
  explicit PowEngine(PowConfig config) : config_(std::move(config)) {}

  std::string_view name() const override { return "pow"; }
  bool allows_forks() const override { return true; }
  bool verify_seal(const chain::BlockHeader& header, const chain::BlockHeader& parent,
                   const chain::HeaderLookup& chain) const override;

  /// Difficulty a child of `parent` must meet: the parent's threshold, or a
  /// retarget over the preceding window at window boundaries.
  Difficulty required_difficulty(const chain::BlockHeader& parent, const chain::HeaderLookup& chain) const;

  const PowConfig& config() const { return config_; }

 private:
  PowConfig config_;
};

}  // namespace iotledger::consensus
