#include "iotledger/lpwan/link.hpp"

#include <array>
#include <string>

#include "iotledger/common/error.hpp"

namespace iotledger::lpwan {

namespace {

constexpr std::array<LinkSpec, 5> kLinks{{
    {LinkTech::LoRa, "lora", 50'000, 11'000, 157, "<500kHz"},
    {LinkTech::Sigfox, "sigfox", 100, 13'000, 160, "100Hz"},
    {LinkTech::NbIot, "nb-iot", 250'000, 15'000, 164, "180kHz"},
    {LinkTech::Emtc, "emtc", 1'000'000, 11'000, 156, "1.08MHz"},
    {LinkTech::EcGsm, "ec-gsm", 140'000, 15'000, 164, "200kHz"},
}};

}  // namespace

const LinkSpec& link_spec(LinkTech tech) { return kLinks[static_cast<std::size_t>(tech)]; }

std::span<const LinkSpec> all_link_specs() { return kLinks; }

LinkTech parse_link_tech(std::string_view name) {
  for (const auto& spec : kLinks) {
    if (spec.name == name) return spec.tech;
  }
  throw Error(ErrorCode::ConfigInvalid, "unknown link technology '" + std::string(name) + "'");
}

double airtime(std::size_t payload_len, LinkTech tech) {
  return static_cast<double>(8 * payload_len) / static_cast<double>(link_spec(tech).max_uplink_bps);
}

std::uint64_t airtime_ms(std::size_t payload_len, LinkTech tech) {
  const std::uint64_t bit_ms = 8ULL * payload_len * 1000ULL;
  const std::uint64_t rate = link_spec(tech).max_uplink_bps;
  return (bit_ms + rate - 1) / rate;
}

}  // namespace iotledger::lpwan
