#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace iotledger::lpwan {

enum class LinkTech { LoRa, Sigfox, NbIot, Emtc, EcGsm };

/// LPWA connectivity figures. Only the uplink rate drives behaviour; range,
/// coupling loss and bandwidth are descriptive.
struct LinkSpec {
  LinkTech tech;
  std::string_view name;
  std::uint64_t max_uplink_bps;
  std::uint64_t max_range_m;
  std::uint32_t max_coupling_loss_db;
  std::string_view bandwidth;
};

const LinkSpec& link_spec(LinkTech tech);
std::span<const LinkSpec> all_link_specs();

/// Accepts "lora", "sigfox", "nb-iot", "emtc", "ec-gsm".
LinkTech parse_link_tech(std::string_view name);

/// (8 * payload_len) / max_uplink_rate, in seconds.
double airtime(std::size_t payload_len, LinkTech tech);

/// Airtime rounded up to the next whole millisecond.
std::uint64_t airtime_ms(std::size_t payload_len, LinkTech tech);

}  // namespace iotledger::lpwan
