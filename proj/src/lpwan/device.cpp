#include "iotledger/lpwan/device.hpp"

#include <stdexcept>
#include <string>

#include "iotledger/common/error.hpp"

namespace iotledger::lpwan {

std::string_view power_source_name(PowerSource p) { return p == PowerSource::Battery ? "battery" : "always-on"; }

std::string_view client_mode_name(ClientMode m) {
  switch (m) {
    case ClientMode::PlainSensor: return "plain-sensor";
    case ClientMode::ServerTrusting: return "server-trusting";
    case ClientMode::ThinClient: return "thin-client";
  }
  return "?";
}

PowerSource parse_power_source(std::string_view name) {
  if (name == "battery") return PowerSource::Battery;
  if (name == "always-on") return PowerSource::AlwaysOn;
  throw Error(ErrorCode::ConfigInvalid, "unknown power source '" + std::string(name) + "'");
}

ClientMode parse_client_mode(std::string_view name) {
  if (name == "plain-sensor") return ClientMode::PlainSensor;
  if (name == "server-trusting") return ClientMode::ServerTrusting;
  if (name == "thin-client") return ClientMode::ThinClient;
  throw Error(ErrorCode::ConfigInvalid, "unknown client mode '" + std::string(name) + "'");
}

bool role_allowed(PowerSource power, ClientMode mode) {
  if (power == PowerSource::Battery) return mode != ClientMode::ThinClient;
  return mode != ClientMode::PlainSensor;
}

Bytes generate_payload(std::uint64_t scenario_seed, const Address& device, std::uint64_t sequence,
                       std::size_t len) {
  Bytes out;
  out.reserve(len);
  for (std::uint64_t block = 0; out.size() < len; ++block) {
    Digest d = Encoder{}.put("payload").put_u64(scenario_seed).put(device).put_u64(sequence).put_u64(block).digest();
    for (auto b : d.bytes) {
      if (out.size() == len) break;
      out.push_back(b);
    }
  }
  return out;
}

EndDevice::EndDevice(KeyPair key, DeviceConfig config, std::uint64_t scenario_seed)
    : key_(std::move(key)), config_(config), seed_(scenario_seed), next_emit_ms_(config.first_emit_ms) {
  if (!role_allowed(config_.power, config_.mode)) {
    throw Error(ErrorCode::RoleViolation, std::string(power_source_name(config_.power)) + " device cannot be a " +
                                              std::string(client_mode_name(config_.mode)));
  }
  if (config_.payload_len > kMaxPayload) throw std::invalid_argument("payload longer than 255 bytes");
  if (config_.emit_period_ms == 0) throw std::invalid_argument("emit period must be positive");
}

std::optional<UplinkFrame> EndDevice::tick(std::uint64_t now_ms) {
  if (exhausted() || now_ms < next_emit_ms_) return std::nullopt;
  UplinkFrame frame;
  frame.device_id = id();
  frame.sequence = sequence_;
  frame.payload = generate_payload(seed_, id(), sequence_, config_.payload_len);
  frame.emitted_at_ms = now_ms;
  frame.airtime_ms = airtime_ms(config_.payload_len, config_.tech);
  ++sequence_;
  next_emit_ms_ += config_.emit_period_ms;
  return frame;
}

void EndDevice::approve_and_sign(chain::Transaction& tx) const {
  if (refuse_signing_) throw Error(ErrorCode::ClientRefused, "device " + id().hex() + " declined to sign");
  if (tx.sender != id()) throw Error(ErrorCode::ClientRefused, "transaction does not name this device as sender");
  tx.sign_with(key_);
}

}  // namespace iotledger::lpwan
