#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "iotledger/lpwan/clients.hpp"
#include "iotledger/lpwan/device.hpp"
#include "iotledger/registry/gas.hpp"
#include "iotledger/store/store.hpp"

namespace iotledger::lpwan {

enum class GatewayRole { FullNode, ThinClient };
std::string_view gateway_role_name(GatewayRole r);
GatewayRole parse_gateway_role(std::string_view name);

/// Resolves a device id to its device when it is a server-trusting client
/// that must sign its own transactions; nullptr means the proxy signs.
using ClientSignerLookup = std::function<const EndDevice*(const Address&)>;

struct IngestOutcome {
  enum class Kind { Submitted, Buffered, Refused };
  Kind kind = Kind::Submitted;
  Address device_id;
  std::optional<ChunkHandle> handle;
  std::optional<Digest> tx_id;
  std::uint64_t received_at_ms = 0;  // when the proxy first saw the payload
};

/// Gateway-resident mediator: stores each payload in the chunk store, then
/// submits a set_device_data transaction for the returned handle. When the
/// store cannot take the write the payload waits in a bounded FIFO buffer and
/// is retried; on overflow the oldest payload is dropped and counted.
class SmartProxy {
 public:
  static constexpr std::size_t kDefaultBufferCapacity = 1024;

  SmartProxy(KeyPair key, std::uint64_t per_tx_gas = registry::kDefaultTxGas,
             std::size_t buffer_capacity = kDefaultBufferCapacity);

  const Address& address() const { return key_.address(); }
  BlockchainServer& server() { return server_; }

  IngestOutcome ingest(store::StoreCluster& store, registry::Mempool& mempool, const Address& device_id,
                       Bytes payload, std::uint64_t now_ms, const ClientSignerLookup& signers = {});

  /// Retries buffered payloads in arrival order, stopping at the first one
  /// that still cannot be stored.
  std::vector<IngestOutcome> retry(store::StoreCluster& store, registry::Mempool& mempool,
                                   const ClientSignerLookup& signers = {});

  std::size_t buffered() const { return buffer_.size(); }
  std::uint64_t dropped() const { return dropped_; }
  std::uint64_t retries() const { return retries_; }
  std::uint64_t next_nonce() const { return nonce_; }

 private:
  struct Pending {
    Address device_id;
    Bytes payload;
    std::uint64_t received_at_ms;
  };

  std::optional<IngestOutcome> try_submit(store::StoreCluster& store, registry::Mempool& mempool,
                                          const Pending& item, const ClientSignerLookup& signers);

  KeyPair key_;
  std::uint64_t per_tx_gas_;
  std::size_t capacity_;
  std::uint64_t nonce_ = 0;
  BlockchainServer server_;
  std::deque<Pending> buffer_;
  std::uint64_t dropped_ = 0;
  std::uint64_t retries_ = 0;
};

inline IngestOutcome proxy_ingest(SmartProxy& proxy, store::StoreCluster& store, registry::Mempool& mempool,
                                  const Address& device_id, Bytes payload, std::uint64_t now_ms) {
  return proxy.ingest(store, mempool, device_id, std::move(payload), now_ms);
}

struct Reception {
  std::uint64_t start_ms = 0;
  std::uint64_t end_ms = 0;
};

/// LPWAN gateway with a single receive channel. Frames that would overlap on
/// air are queued FIFO rather than collided.
class Gateway {
 public:
  Gateway(std::string name, GatewayRole role, SmartProxy proxy);

  const std::string& name() const { return name_; }
  GatewayRole role() const { return role_; }
  SmartProxy& proxy() { return proxy_; }
  const SmartProxy& proxy() const { return proxy_; }

  /// Reserves the channel for `frame`, starting no earlier than its emission
  /// and no earlier than the end of the previous reception.
  Reception schedule_reception(const UplinkFrame& frame);

  /// Delivers a fully received frame to the proxy exactly once. Throws
  /// DuplicateFrame for a (device, sequence) pair already delivered.
  IngestOutcome receive(const UplinkFrame& frame, store::StoreCluster& store, registry::Mempool& mempool,
                        std::uint64_t now_ms, const ClientSignerLookup& signers = {});

  const std::vector<Reception>& channel_log() const { return channel_log_; }
  std::uint64_t frames_received() const { return received_; }
  std::uint64_t duplicates_dropped() const { return duplicates_; }

 private:
  std::string name_;
  GatewayRole role_;
  SmartProxy proxy_;
  std::uint64_t channel_free_at_ms_ = 0;
  std::vector<Reception> channel_log_;
  std::set<std::pair<Address, std::uint64_t>> seen_;
  std::uint64_t received_ = 0;
  std::uint64_t duplicates_ = 0;
};

inline IngestOutcome gateway_receive(Gateway& gw, const UplinkFrame& frame, store::StoreCluster& store,
                                     registry::Mempool& mempool, std::uint64_t now_ms) {
  return gw.receive(frame, store, mempool, now_ms);
}

}  // namespace iotledger::lpwan
