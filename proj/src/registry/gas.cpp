#include "iotledger/registry/gas.hpp"

#include "iotledger/common/error.hpp"

namespace iotledger::registry {

void GasSchedule::validate() const {
  if (per_tx_gas == 0) throw Error(ErrorCode::InvalidGasSchedule, "per-transaction gas must be positive");
  if (per_tx_gas > block_gas_limit) {
    throw Error(ErrorCode::InvalidGasSchedule, "per-transaction gas " + std::to_string(per_tx_gas) +
                                                   " exceeds block limit " + std::to_string(block_gas_limit));
  }
}

std::vector<chain::Transaction> pack_block(std::span<const chain::Transaction> queue, const GasSchedule& schedule) {
  std::vector<chain::Transaction> out;
  std::uint64_t gas = 0;
  for (const auto& tx : queue) {
    if (gas + tx.gas_used > schedule.block_gas_limit) break;
    gas += tx.gas_used;
    out.push_back(tx);
  }
  return out;
}

bool Mempool::submit(chain::Transaction tx) {
  Digest id = tx.id();
  if (!ids_.insert(id).second) return false;
  entries_.push_back(Entry{std::move(tx), id});
  return true;
}

std::vector<chain::Transaction> Mempool::pack(const GasSchedule& schedule,
                                              const std::function<bool(const Digest&)>& skip) const {
  std::vector<chain::Transaction> out;
  std::uint64_t gas = 0;
  for (const auto& e : entries_) {
    if (skip && skip(e.id)) continue;
    if (gas + e.tx.gas_used > schedule.block_gas_limit) break;
    gas += e.tx.gas_used;
    out.push_back(e.tx);
  }
  return out;
}

std::size_t Mempool::remove_if(const std::function<bool(const Digest&)>& pred) {
  std::size_t removed = 0;
  std::deque<Entry> kept;
  for (auto& e : entries_) {
    if (pred(e.id)) {
      ids_.erase(e.id);
      ++removed;
    } else {
      kept.push_back(std::move(e));
    }
  }
  entries_.swap(kept);
  return removed;
}

}  // namespace iotledger::registry
