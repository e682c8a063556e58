#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "iotledger/chain/block.hpp"
#include "iotledger/common/chunk_handle.hpp"

namespace iotledger::registry {

/// Deduplicated registers a device once; FaithfulListing pushes the device id
/// on every write, exactly as the original contract listing does.
enum class RegistryMode { Deduplicated, FaithfulListing };

std::string_view registry_mode_name(RegistryMode mode);
RegistryMode parse_registry_mode(std::string_view name);

struct DeviceData {
  std::uint64_t index = 0;
  std::vector<std::uint64_t> timestamps;
  std::map<std::uint64_t, ChunkHandle> filehashes;

  bool operator==(const DeviceData&) const = default;
};

/// The contract's log_action event.
struct LogAction {
  Address device_id;
  std::uint64_t index = 0;
  std::uint64_t timestamp = 0;
  ChunkHandle filehash;

  bool operator==(const LogAction&) const = default;
};

struct SetResult {
  std::uint64_t index = 0;
  std::uint64_t timestamp = 0;
  LogAction event;
};

/// Contract storage plus the six contract functions. Only set_device_data
/// mutates; the getters are constant functions.
class Registry {
 public:
  explicit Registry(RegistryMode mode = RegistryMode::Deduplicated) : mode_(mode) {}

  SetResult set_device_data(const Address& device_id, const ChunkHandle& filehash,
                            std::uint64_t block_timestamp);

  bool is_device_present(const Address& device_id) const;
  std::uint64_t get_device_count() const { return device_index_.size(); }
  /// Throws IndexOutOfRange.
  Address get_device_at_index(std::uint64_t i) const;
  /// Empty for unknown devices.
  std::vector<std::uint64_t> get_device_timestamps(const Address& device_id) const;
  /// Throws NotFound for an unknown (device, timestamp).
  ChunkHandle get_device_data(const Address& device_id, std::uint64_t timestamp) const;

  /// Runs every transaction of `block` through set_device_data at the block's
  /// timestamp and returns the emitted events in transaction order.
  std::vector<LogAction> apply_block(const chain::Block& block);

  /// SHA-256 over a canonical encoding of the full contract storage.
  Digest fingerprint() const;

  /// Deduplicated-mode storage invariants: no duplicate ids, index/log
  /// agreement, sorted duplicate-free timestamps each with a handle.
  bool invariants_hold() const;

  RegistryMode mode() const { return mode_; }
  const std::vector<Address>& device_index() const { return device_index_; }
  const std::map<Address, DeviceData>& device_logs() const { return device_logs_; }

 private:
  RegistryMode mode_;
  std::vector<Address> device_index_;
  std::map<Address, DeviceData> device_logs_;
};

}  // namespace iotledger::registry
