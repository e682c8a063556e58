#pragma once

#include <cstdint>
#include <span>

#include "iotledger/common/uint256.hpp"

namespace iotledger::consensus {

/// Proof-of-work target. A seal digest is valid iff it is numerically below
/// the threshold, so larger thresholds are easier.
class Difficulty {
 public:
  /// Throws InvalidDifficulty for a zero threshold.
  explicit Difficulty(U256 threshold);

  /// Threshold giving roughly `attempts` expected hashes per solution.
  static Difficulty for_expected_attempts(std::uint64_t attempts);

  const U256& threshold() const { return threshold_; }
  bool accepts(const Digest& seal_digest) const { return U256::from_digest(seal_digest) < threshold_; }
  double expected_attempts() const;

  bool operator==(const Difficulty&) const = default;

 private:
  U256 threshold_;
};

struct RetargetPolicy {
  std::uint64_t window = 16;  // blocks between adjustments
  std::uint64_t clamp = 4;    // max factor per adjustment, either direction
};

/// new threshold = current * (mean observed interval / target), with the
/// factor clamped to [1/clamp, clamp]. Intervals are whole seconds.
Difficulty retarget(std::span<const std::uint64_t> recent_block_times, const Difficulty& current,
                    std::uint64_t target_interval_s, const RetargetPolicy& policy = {});

}  // namespace iotledger::consensus
