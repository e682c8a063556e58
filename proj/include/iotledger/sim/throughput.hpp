#pragma once

#include <cstdint>
#include <string>

namespace iotledger::sim {

struct ThroughputModel {
  std::uint64_t tx_per_block = 0;
  double tps = 0.0;
  double tx_per_minute = 0.0;
  /// Set when the gas limit is not a whole multiple of the per-tx gas, since
  /// quoting the quotient rounded to nearest overstates the block capacity.
  std::string rounding_note;
};

/// tx_per_block = floor(gas_limit / per_tx_gas), tps = tx_per_block /
/// block_time_s, tx_per_minute = 60 * tps. Throws std::invalid_argument on a
/// zero input.
ThroughputModel throughput_model(std::uint64_t gas_limit, std::uint64_t per_tx_gas, double block_time_s);

}  // namespace iotledger::sim
