#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "iotledger/chain/transaction.hpp"
#include "iotledger/lpwan/link.hpp"

namespace iotledger::lpwan {

inline constexpr std::size_t kMaxPayload = 255;

enum class PowerSource { Battery, AlwaysOn };
enum class ClientMode { PlainSensor, ServerTrusting, ThinClient };

std::string_view power_source_name(PowerSource p);
std::string_view client_mode_name(ClientMode m);
PowerSource parse_power_source(std::string_view name);
ClientMode parse_client_mode(std::string_view name);

/// Role matrix: battery devices may be plain sensors or server-trusting
/// clients; always-on devices may be thin or server-trusting clients.
bool role_allowed(PowerSource power, ClientMode mode);

struct DeviceConfig {
  PowerSource power = PowerSource::Battery;
  ClientMode mode = ClientMode::PlainSensor;
  LinkTech tech = LinkTech::LoRa;
  std::uint64_t emit_period_ms = 900'000;
  std::size_t payload_len = 12;
  std::uint64_t first_emit_ms = 0;
  std::uint64_t max_frames = 0;  // 0 = no limit
};

struct UplinkFrame {
  Address device_id;
  std::uint64_t sequence = 0;
  Bytes payload;
  std::uint64_t emitted_at_ms = 0;
  std::uint64_t airtime_ms = 0;
};

/// Deterministic sensor reading for (seed, device, sequence); the device id
/// salts it so two devices never emit the same bytes for the same sequence.
Bytes generate_payload(std::uint64_t scenario_seed, const Address& device, std::uint64_t sequence,
                       std::size_t len);

class EndDevice {
 public:
  /// Throws RoleViolation for a combination outside the role matrix and
  /// std::invalid_argument for payloads over 255 bytes or a zero period.
  EndDevice(KeyPair key, DeviceConfig config, std::uint64_t scenario_seed);

  const Address& id() const { return key_.address(); }
  const PublicKey& public_key() const { return key_.public_key(); }
  const DeviceConfig& config() const { return config_; }

  /// Emits the next frame once `now_ms` reaches the next emission time.
  std::optional<UplinkFrame> tick(std::uint64_t now_ms);
  std::uint64_t next_emit_ms() const { return next_emit_ms_; }
  std::uint64_t frames_emitted() const { return sequence_; }
  bool exhausted() const { return config_.max_frames != 0 && sequence_ >= config_.max_frames; }

  /// Server-trusting flow: sign a transaction the server prepared for us.
  /// Throws ClientRefused when the device declines or the transaction does
  /// not name this device as sender.
  void approve_and_sign(chain::Transaction& tx) const;
  void set_refuse_signing(bool refuse) { refuse_signing_ = refuse; }

 private:
  KeyPair key_;
  DeviceConfig config_;
  std::uint64_t seed_;
  std::uint64_t sequence_ = 0;
  std::uint64_t next_emit_ms_;
  bool refuse_signing_ = false;
};

inline std::optional<UplinkFrame> device_tick(EndDevice& device, std::uint64_t now_ms) {
  return device.tick(now_ms);
}

}  // namespace iotledger::lpwan
