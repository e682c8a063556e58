#include "iotledger/consensus/difficulty.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "iotledger/common/error.hpp"

namespace iotledger::consensus {

Difficulty::Difficulty(U256 threshold) : threshold_(threshold) {
  if (threshold_.is_zero()) throw Error(ErrorCode::InvalidDifficulty, "threshold must be positive");
}

Difficulty Difficulty::for_expected_attempts(std::uint64_t attempts) {
  if (attempts <= 1) return Difficulty(U256::max());
  return Difficulty(U256::max().div(attempts));
}

double Difficulty::expected_attempts() const { return U256::max().to_double() / threshold_.to_double(); }

Difficulty retarget(std::span<const std::uint64_t> recent_block_times, const Difficulty& current,
                    std::uint64_t target_interval_s, const RetargetPolicy& policy) {
  if (recent_block_times.empty()) throw std::invalid_argument("retarget: no block times");
  if (target_interval_s == 0) throw std::invalid_argument("retarget: zero target interval");
  if (policy.clamp == 0) throw std::invalid_argument("retarget: zero clamp");

  // observed_total / (count * target), clamped, applied as one exact ratio.
  std::uint64_t observed = std::accumulate(recent_block_times.begin(), recent_block_times.end(),
                                           std::uint64_t{0});
  std::uint64_t expected = recent_block_times.size() * target_interval_s;
  observed = std::clamp(observed, (expected + policy.clamp - 1) / policy.clamp, expected * policy.clamp);
  observed = std::max<std::uint64_t>(observed, 1);

  U256 next = current.threshold().mul_div(observed, expected);
  if (next.is_zero()) next = U256(1);
  return Difficulty(next);
}

}  // namespace iotledger::consensus
