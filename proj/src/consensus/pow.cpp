#include "iotledger/consensus/pow.hpp"

#include <atomic>
#include <stdexcept>
#include <vector>

namespace iotledger::consensus {

namespace {
std::atomic<std::uint64_t> g_pow_hashes{0};
}  // namespace

Digest pow_hash(const chain::BlockHeader& header, std::uint64_t nonce) {
  g_pow_hashes.fetch_add(1, std::memory_order_relaxed);
  Bytes msg = chain::unsealed_header_bytes(header);
  append_u64_be(msg, nonce);
  return sha256(msg);
}

std::uint64_t pow_hash_invocations() { return g_pow_hashes.load(std::memory_order_relaxed); }

PowSearch pow_seal(const chain::BlockHeader& header, const Difficulty& difficulty,
                   std::uint64_t attempt_budget, std::uint64_t start_nonce) {
  if (attempt_budget == 0) throw std::invalid_argument("pow_seal: attempt budget must be positive");
  Bytes msg = chain::unsealed_header_bytes(header);
  const std::size_t prefix = msg.size();
  PowSearch result;
  std::uint64_t nonce = start_nonce;
  while (result.attempts < attempt_budget) {
    msg.resize(prefix);
    append_u64_be(msg, nonce);
    g_pow_hashes.fetch_add(1, std::memory_order_relaxed);
    ++result.attempts;
    if (difficulty.accepts(sha256(msg))) {
      result.nonce = nonce;
      result.next_nonce = nonce + 1;
      return result;
    }
    ++nonce;
  }
  result.next_nonce = nonce;
  return result;
}

bool pow_verify(const chain::BlockHeader& header, const chain::PowSeal& seal, const Difficulty& difficulty) {
  return difficulty.accepts(pow_hash(header, seal.nonce));
}

Difficulty PowEngine::required_difficulty(const chain::BlockHeader& parent,
                                          const chain::HeaderLookup& chain) const {
  const auto* parent_seal = std::get_if<chain::PowSeal>(&parent.seal);
  if (parent_seal == nullptr) return config_.initial;
  Difficulty current(parent_seal->threshold);

  const std::uint64_t window = config_.policy.window;
  if (window == 0 || (parent.height + 1) % window != 0) return current;

  std::vector<std::uint64_t> intervals;
  const chain::BlockHeader* cursor = &parent;
  while (intervals.size() < window && cursor->height > 0) {
    const chain::BlockHeader* prev = chain.find_header(cursor->parent_hash);
    if (prev == nullptr) break;
    intervals.push_back(cursor->timestamp - prev->timestamp);
    cursor = prev;
  }
  if (intervals.empty()) return current;
  return retarget(intervals, current, config_.target_interval_s, config_.policy);
}

bool PowEngine::verify_seal(const chain::BlockHeader& header, const chain::BlockHeader& parent,
                            const chain::HeaderLookup& chain) const {
  const auto* seal = std::get_if<chain::PowSeal>(&header.seal);
  if (seal == nullptr) return false;
  Difficulty required = required_difficulty(parent, chain);
  if (seal->threshold != required.threshold()) return false;
  return pow_verify(header, *seal, required);
}

}  // namespace iotledger::consensus
