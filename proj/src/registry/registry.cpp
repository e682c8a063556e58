#include "iotledger/registry/registry.hpp"

#include <algorithm>
#include <set>

#include "iotledger/common/error.hpp"

namespace iotledger::registry {

std::string_view registry_mode_name(RegistryMode mode) {
  return mode == RegistryMode::Deduplicated ? "deduplicated" : "faithful-listing";
}

RegistryMode parse_registry_mode(std::string_view name) {
  if (name == "deduplicated") return RegistryMode::Deduplicated;
  if (name == "faithful-listing") return RegistryMode::FaithfulListing;
  throw Error(ErrorCode::Malformed, "unknown registry mode '" + std::string(name) + "'");
}

SetResult Registry::set_device_data(const Address& device_id, const ChunkHandle& filehash,
                                    std::uint64_t block_timestamp) {
  const std::uint64_t ts = block_timestamp;
  auto [slot, inserted] = device_logs_.try_emplace(device_id);
  DeviceData& data = slot->second;
  std::uint64_t event_index = 0;

  if (mode_ == RegistryMode::FaithfulListing) {
    data.timestamps.push_back(ts);
    data.filehashes[ts] = filehash;
    device_index_.push_back(device_id);
    data.index = device_index_.size() - 1;
    event_index = device_index_.size() - 1;
  } else {
    if (inserted) {
      device_index_.push_back(device_id);
      data.index = device_index_.size() - 1;
    }
    if (data.filehashes.count(ts) == 0) data.timestamps.push_back(ts);
    data.filehashes[ts] = filehash;
    event_index = data.index;
  }

  LogAction event{device_id, event_index, ts, filehash};
  return SetResult{event_index, ts, event};
}

bool Registry::is_device_present(const Address& device_id) const { return device_logs_.count(device_id) != 0; }

Address Registry::get_device_at_index(std::uint64_t i) const {
  if (i >= device_index_.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "device index " + std::to_string(i) + " of " + std::to_string(device_index_.size()));
  }
  return device_index_[i];
}

std::vector<std::uint64_t> Registry::get_device_timestamps(const Address& device_id) const {
  auto it = device_logs_.find(device_id);
  return it == device_logs_.end() ? std::vector<std::uint64_t>{} : it->second.timestamps;
}

ChunkHandle Registry::get_device_data(const Address& device_id, std::uint64_t timestamp) const {
  auto it = device_logs_.find(device_id);
  if (it != device_logs_.end()) {
    auto h = it->second.filehashes.find(timestamp);
    if (h != it->second.filehashes.end()) return h->second;
  }
  throw Error(ErrorCode::NotFound, "no data for device " + device_id.hex() + " at " + std::to_string(timestamp));
}

std::vector<LogAction> Registry::apply_block(const chain::Block& block) {
  std::vector<LogAction> events;
  events.reserve(block.transactions.size());
  for (const auto& tx : block.transactions) {
    if (tx.call.function != chain::kSetDeviceData) continue;
    events.push_back(set_device_data(tx.call.device_id, tx.call.filehash, block.header.timestamp).event);
  }
  return events;
}

Digest Registry::fingerprint() const {
  Encoder enc;
  enc.put_u64(device_index_.size());
  for (const auto& a : device_index_) enc.put(a);
  enc.put_u64(device_logs_.size());
  for (const auto& [addr, data] : device_logs_) {
    enc.put(addr).put_u64(data.index).put_u64(data.timestamps.size());
    for (auto ts : data.timestamps) enc.put_u64(ts);
    enc.put_u64(data.filehashes.size());
    for (const auto& [ts, h] : data.filehashes) enc.put_u64(ts).put(h);
  }
  return enc.digest();
}

bool Registry::invariants_hold() const {
  std::set<Address> unique(device_index_.begin(), device_index_.end());
  if (unique.size() != device_index_.size()) return false;
  if (device_logs_.size() != device_index_.size()) return false;
  for (const auto& [addr, data] : device_logs_) {
    if (data.index >= device_index_.size() || device_index_[data.index] != addr) return false;
    if (!std::is_sorted(data.timestamps.begin(), data.timestamps.end())) return false;
    if (std::adjacent_find(data.timestamps.begin(), data.timestamps.end()) != data.timestamps.end()) return false;
    if (data.timestamps.size() != data.filehashes.size()) return false;
    for (auto ts : data.timestamps) {
      if (data.filehashes.count(ts) == 0) return false;
    }
  }
  return true;
}

}  // namespace iotledger::registry
