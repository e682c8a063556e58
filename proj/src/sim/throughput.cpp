#include "iotledger/sim/throughput.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace iotledger::sim {

ThroughputModel throughput_model(std::uint64_t gas_limit, std::uint64_t per_tx_gas, double block_time_s) {
  if (gas_limit == 0 || per_tx_gas == 0 || !(block_time_s > 0.0)) {
    throw std::invalid_argument("throughput model inputs must be positive");
  }
  ThroughputModel m;
  m.tx_per_block = gas_limit / per_tx_gas;
  m.tps = static_cast<double>(m.tx_per_block) / block_time_s;
  m.tx_per_minute = 60.0 * m.tps;

  std::uint64_t remainder = gas_limit % per_tx_gas;
  if (remainder != 0) {
    double exact = static_cast<double>(gas_limit) / static_cast<double>(per_tx_gas);
    auto nearest = static_cast<std::uint64_t>(std::llround(exact));
    char buf[256];
    if (nearest != m.tx_per_block) {
      std::snprintf(buf, sizeof buf,
                    "%llu / %llu = %.2f; only %llu whole transactions fit in a block "
                    "(rounding to nearest would give %llu, %.1f tx/min)",
                    static_cast<unsigned long long>(gas_limit), static_cast<unsigned long long>(per_tx_gas), exact,
                    static_cast<unsigned long long>(m.tx_per_block), static_cast<unsigned long long>(nearest),
                    60.0 * static_cast<double>(nearest) / block_time_s);
    } else {
      std::snprintf(buf, sizeof buf, "%llu / %llu = %.2f; %llu whole transactions fit in a block",
                    static_cast<unsigned long long>(gas_limit), static_cast<unsigned long long>(per_tx_gas), exact,
                    static_cast<unsigned long long>(m.tx_per_block));
    }
    m.rounding_note = buf;
  }
  return m;
}

}  // namespace iotledger::sim
