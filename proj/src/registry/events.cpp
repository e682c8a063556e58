#include "iotledger/registry/events.hpp"

#include "iotledger/common/error.hpp"

namespace iotledger::registry {

using nlohmann::json;

json log_action_to_json(const LogAction& event) {
  return {{"device_id", event.device_id.hex()},
          {"index", event.index},
          {"timestamp", event.timestamp},
          {"filehash", event.filehash.hex()}};
}

LogAction log_action_from_json(const json& j) {
  auto need = [&](const char* key) -> const json& {
    if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::Malformed, std::string("event missing ") + key);
    return j.at(key);
  };
  const json& device = need("device_id");
  const json& index = need("index");
  const json& ts = need("timestamp");
  const json& handle = need("filehash");
  if (!device.is_string() || !handle.is_string() || !index.is_number_unsigned() || !ts.is_number_unsigned()) {
    throw Error(ErrorCode::Malformed, "event field has the wrong type");
  }
  return LogAction{Address::from_hex(device.get<std::string>()), index.get<std::uint64_t>(),
                   ts.get<std::uint64_t>(), ChunkHandle::from_hex(handle.get<std::string>())};
}

std::string log_action_to_line(const LogAction& event) { return log_action_to_json(event).dump(); }

LogAction log_action_from_line(const std::string& line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::Malformed, "event line is not valid JSON");
  return log_action_from_json(j);
}

Registry replay_events(std::span<const LogAction> events, RegistryMode mode) {
  Registry reg(mode);
  std::uint64_t n = 0;
  for (const auto& e : events) {
    SetResult r = reg.set_device_data(e.device_id, e.filehash, e.timestamp);
    if (r.event != e) {
      throw Error(ErrorCode::Malformed, "event " + std::to_string(n) + " does not replay: index " +
                                            std::to_string(e.index) + " vs " + std::to_string(r.index));
    }
    ++n;
  }
  return reg;
}

EventBus::SubscriptionId EventBus::subscribe(std::optional<Address> device_filter, Callback callback) {
  SubscriptionId id = next_id_++;
  subscribers_.emplace(id, Subscriber{device_filter, std::move(callback)});
  return id;
}

void EventBus::unsubscribe(SubscriptionId id) { subscribers_.erase(id); }

void EventBus::publish(const LogAction& event) const {
  for (const auto& [id, sub] : subscribers_) {
    if (!sub.filter || *sub.filter == event.device_id) sub.callback(event);
  }
}

}  // namespace iotledger::registry
