#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "iotledger/common/bytes.hpp"
#include "iotledger/lpwan/device.hpp"
#include "iotledger/lpwan/gateway.hpp"
#include "iotledger/lpwan/link.hpp"

namespace iotledger::sim {

// Scenario files are flat `key = value` text with `[section]` headers and `#`
// comments. The first setting must be `schema = 1`. Unknown sections or keys,
// repeated keys and out-of-range values are all ConfigInvalid errors naming
// the line and key. Integers may use `_` as a digit separator.
//
//   schema = 1
//   seed = 7
//
//   [chain]    consensus, block_interval_s, gas_limit, tx_gas, confirmations,
//              propagation_delay_ms
//   [pow]      miners, hashrate, initial_attempts, retarget_window,
//              retarget_clamp
//   [pos]      stakes
//   [pbft]     validators, f, offline, view_timeout_ms
//   [devices.NAME]  count, power, mode, tech, emit_period_s, payload_len,
//              frames, stagger_ms, refuse_signing
//   [gateways] count, roles, loss_probability, proxy_buffer
//   [store]    nodes, replication, outage_nodes, outage_start_s, outage_end_s
//   [run]      duration_s, max_blocks, saturate, drain_limit_s

inline constexpr std::uint64_t kScenarioSchema = 1;

enum class ConsensusKind { Pow, Pos, Pbft };
std::string_view consensus_name(ConsensusKind kind);

struct DeviceClass {
  std::string name;
  std::uint64_t count = 1;
  lpwan::PowerSource power = lpwan::PowerSource::Battery;
  lpwan::ClientMode mode = lpwan::ClientMode::PlainSensor;
  lpwan::LinkTech tech = lpwan::LinkTech::LoRa;
  std::uint64_t emit_period_ms = 900'000;
  std::uint64_t payload_len = 12;
  std::uint64_t frames = 0;  // per device; 0 = until the run ends
  std::uint64_t stagger_ms = 0;
  bool refuse_signing = false;

  bool operator==(const DeviceClass&) const = default;
};

struct Scenario {
  std::uint64_t seed = 1;

  ConsensusKind consensus = ConsensusKind::Pow;
  std::uint64_t block_interval_s = 14;
  std::uint64_t gas_limit = 4'712'388;
  std::uint64_t tx_gas = 21'000;
  std::uint64_t confirmations = 6;
  std::uint64_t propagation_delay_ms = 0;

  std::uint64_t miners = 1;
  std::uint64_t hashrate = 64;  // attempts per simulated second per miner
  std::uint64_t initial_attempts = 0;  // 0 = miners * hashrate * block_interval_s
  std::uint64_t retarget_window = 16;
  std::uint64_t retarget_clamp = 4;

  std::vector<std::uint64_t> stakes{1};

  std::uint64_t validators = 4;
  std::uint64_t f = 1;
  std::vector<std::uint64_t> offline;
  std::uint64_t view_timeout_ms = 4'000;

  std::vector<DeviceClass> devices;

  std::uint64_t gateways = 1;
  std::vector<lpwan::GatewayRole> gateway_roles{lpwan::GatewayRole::FullNode};
  double loss_probability = 0.0;
  std::uint64_t proxy_buffer = lpwan::SmartProxy::kDefaultBufferCapacity;

  std::uint64_t store_nodes = 5;
  std::uint64_t replication = 3;
  std::uint64_t outage_nodes = 0;
  std::uint64_t outage_start_s = 0;
  std::uint64_t outage_end_s = 0;

  std::uint64_t duration_s = 600;
  std::uint64_t max_blocks = 0;  // 0 = no block cap
  bool saturate = false;
  std::uint64_t drain_limit_s = 86'400;

  bool operator==(const Scenario&) const = default;

  std::uint64_t device_count() const;
  lpwan::GatewayRole gateway_role(std::uint64_t i) const { return gateway_roles[i % gateway_roles.size()]; }

  /// Normalised text form; parses back to an equal scenario.
  std::string canonical_text() const;
  /// Commitment stored in the genesis seal.
  Digest config_digest() const;
};

/// Throws Error(ConfigInvalid) with a line-level diagnostic.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

/// Cross-field checks; parse_scenario already runs them.
void validate_scenario(const Scenario& s);

}  // namespace iotledger::sim
