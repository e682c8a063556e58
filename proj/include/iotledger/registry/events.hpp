#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "iotledger/registry/registry.hpp"

namespace iotledger::registry {

// Event log export: one JSON object per line,
//   {"device_id":"<hex>","index":N,"timestamp":T,"filehash":"<hex>"}
nlohmann::json log_action_to_json(const LogAction& event);
LogAction log_action_from_json(const nlohmann::json& j);
std::string log_action_to_line(const LogAction& event);
LogAction log_action_from_line(const std::string& line);

/// Rebuilds contract storage from an event log. Throws Malformed when an
/// event's index disagrees with what the contract would have emitted.
Registry replay_events(std::span<const LogAction> events, RegistryMode mode);

/// Synchronous fan-out of committed events to listeners, optionally filtered
/// on one device.
class EventBus {
 public:
  using Callback = std::function<void(const LogAction&)>;
  using SubscriptionId = std::uint64_t;

  SubscriptionId subscribe(std::optional<Address> device_filter, Callback callback);
  void unsubscribe(SubscriptionId id);
  void publish(const LogAction& event) const;
  std::size_t subscriber_count() const { return subscribers_.size(); }

 private:
  struct Subscriber {
    std::optional<Address> filter;
    Callback callback;
  };
  std::map<SubscriptionId, Subscriber> subscribers_;
  SubscriptionId next_id_ = 1;
};

}  // namespace iotledger::registry
