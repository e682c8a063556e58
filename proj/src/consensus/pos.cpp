#include "iotledger/consensus/pos.hpp"

#include <stdexcept>

#include "iotledger/common/error.hpp"
#include "iotledger/common/rng.hpp"

namespace iotledger::consensus {

std::uint64_t total_stake(const StakeTable& stakes) {
  std::uint64_t total = 0;
  for (const auto& [addr, stake] : stakes) {
    if (__builtin_add_overflow(total, stake, &total)) throw std::overflow_error("stake table total overflows");
  }
  return total;
}

Address pos_select(const StakeTable& stakes, const Digest& seed) {
  const std::uint64_t total = total_stake(stakes);
  if (total == 0) throw Error(ErrorCode::ZeroTotalStake, "selection over zero total stake");
  const std::uint64_t target = scale_to(digest_prefix_u64(seed), total);
  std::uint64_t cumulative = 0;
  for (const auto& [addr, stake] : stakes) {
    cumulative += stake;
    if (target < cumulative) return addr;
  }
  return stakes.rbegin()->first;  // unreachable: target < total
}

Digest pos_draw_seed(const Digest& chain_seed, const Digest& parent_hash, std::uint64_t slot) {
  return Encoder{}.put("pos-draw").put(chain_seed).put(parent_hash).put_u64(slot).digest();
}

void seal_pos_block(chain::BlockHeader& header, const KeyPair& validator, std::uint64_t slot) {
  chain::PosSeal seal;
  seal.validator = validator.address();
  seal.validator_key = validator.public_key();
  seal.slot = slot;
  seal.signature = validator.sign(chain::unsealed_header_bytes(header));
  header.seal = seal;
}

Address PosEngine::leader(const Digest& parent_hash, std::uint64_t slot) const {
  return pos_select(config_.stakes, pos_draw_seed(config_.chain_seed, parent_hash, slot));
}

bool PosEngine::verify_seal(const chain::BlockHeader& header, const chain::BlockHeader& parent,
                            const chain::HeaderLookup&) const {
  const auto* seal = std::get_if<chain::PosSeal>(&header.seal);
  if (seal == nullptr) return false;
  std::uint64_t parent_slot = 0;
  if (const auto* ps = std::get_if<chain::PosSeal>(&parent.seal)) parent_slot = ps->slot;
  if (seal->slot <= parent_slot) return false;
  if (header.timestamp != slot_timestamp(seal->slot)) return false;
  if (address_of(seal->validator_key) != seal->validator) return false;
  if (leader(header.parent_hash, seal->slot) != seal->validator) return false;
  return verify_signature(seal->validator_key, chain::unsealed_header_bytes(header), seal->signature);
}

}  // namespace iotledger::consensus
