#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <span>
#include <unordered_set>
#include <vector>

#include "iotledger/chain/transaction.hpp"

namespace iotledger::registry {

inline constexpr std::uint64_t kDefaultTxGas = 21'000;

/// Every registry transaction costs exactly per_tx_gas.
struct GasSchedule {
  std::uint64_t per_tx_gas = kDefaultTxGas;
  std::uint64_t block_gas_limit = 0;

  /// Throws InvalidGasSchedule unless 0 < per_tx_gas <= block_gas_limit.
  void validate() const;
  std::uint64_t max_tx_per_block() const { return block_gas_limit / per_tx_gas; }
};

/// Longest prefix of `queue` whose gas sum stays within the block limit.
std::vector<chain::Transaction> pack_block(std::span<const chain::Transaction> queue, const GasSchedule& schedule);

/// Ordered pending-transaction queue shared by the proxies and block producers.
class Mempool {
 public:
  struct Entry {
    chain::Transaction tx;
    Digest id;
  };

  /// False (and no change) when the transaction is already queued.
  bool submit(chain::Transaction tx);
  bool contains(const Digest& id) const { return ids_.count(id) != 0; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::deque<Entry>& entries() const { return entries_; }

  /// Same prefix rule as pack_block, over the queue with `skip`ped
  /// transactions (already on the producer's branch) removed first.
  std::vector<chain::Transaction> pack(const GasSchedule& schedule,
                                       const std::function<bool(const Digest&)>& skip = {}) const;

  std::size_t remove_if(const std::function<bool(const Digest&)>& pred);

 private:
  std::deque<Entry> entries_;
  std::unordered_set<Digest> ids_;
};

}  // namespace iotledger::registry
