#include "iotledger/lpwan/gateway.hpp"

#include <algorithm>

#include "iotledger/common/error.hpp"

namespace iotledger::lpwan {

std::string_view gateway_role_name(GatewayRole r) { return r == GatewayRole::FullNode ? "full-node" : "thin-client"; }

GatewayRole parse_gateway_role(std::string_view name) {
  if (name == "full-node") return GatewayRole::FullNode;
  if (name == "thin-client") return GatewayRole::ThinClient;
  throw Error(ErrorCode::ConfigInvalid, "unknown gateway role '" + std::string(name) + "'");
}

SmartProxy::SmartProxy(KeyPair key, std::uint64_t per_tx_gas, std::size_t buffer_capacity)
    : key_(std::move(key)), per_tx_gas_(per_tx_gas), capacity_(buffer_capacity), server_(per_tx_gas) {
  if (capacity_ == 0) throw std::invalid_argument("proxy buffer capacity must be positive");
}

std::optional<IngestOutcome> SmartProxy::try_submit(store::StoreCluster& store, registry::Mempool& mempool,
                                                    const Pending& item, const ClientSignerLookup& signers) {
  ChunkHandle handle;
  try {
    handle = store.put(item.payload);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InsufficientReplicas) return std::nullopt;
    throw;
  }

  IngestOutcome out;
  out.device_id = item.device_id;
  out.handle = handle;
  out.received_at_ms = item.received_at_ms;
  auto call = chain::set_device_data_call(item.device_id, handle);

  const EndDevice* client = signers ? signers(item.device_id) : nullptr;
  if (client != nullptr) {
    if (!server_.knows(client->id())) server_.register_client(client->public_key());
    try {
      out.tx_id = server_trusting_submit(server_, *client, std::move(call), mempool).id();
      out.kind = IngestOutcome::Kind::Submitted;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ClientRefused) throw;
      out.kind = IngestOutcome::Kind::Refused;
    }
    return out;
  }

  chain::Transaction tx = chain::make_signed_transaction(key_, nonce_++, std::move(call), per_tx_gas_);
  out.tx_id = tx.id();
  mempool.submit(std::move(tx));
  out.kind = IngestOutcome::Kind::Submitted;
  return out;
}

IngestOutcome SmartProxy::ingest(store::StoreCluster& store, registry::Mempool& mempool, const Address& device_id,
                                 Bytes payload, std::uint64_t now_ms, const ClientSignerLookup& signers) {
  Pending item{device_id, std::move(payload), now_ms};
  // Keep arrival order: nothing overtakes an older buffered payload.
  if (buffer_.empty()) {
    if (auto out = try_submit(store, mempool, item, signers)) return *out;
  }
  if (buffer_.size() == capacity_) {
    buffer_.pop_front();
    ++dropped_;
  }
  buffer_.push_back(std::move(item));
  IngestOutcome out;
  out.kind = IngestOutcome::Kind::Buffered;
  out.device_id = device_id;
  out.received_at_ms = now_ms;
  return out;
}

std::vector<IngestOutcome> SmartProxy::retry(store::StoreCluster& store, registry::Mempool& mempool,
                                             const ClientSignerLookup& signers) {
  std::vector<IngestOutcome> done;
  while (!buffer_.empty()) {
    ++retries_;
    auto out = try_submit(store, mempool, buffer_.front(), signers);
    if (!out) break;
    done.push_back(*out);
    buffer_.pop_front();
  }
  return done;
}

Gateway::Gateway(std::string name, GatewayRole role, SmartProxy proxy)
    : name_(std::move(name)), role_(role), proxy_(std::move(proxy)) {}

Reception Gateway::schedule_reception(const UplinkFrame& frame) {
  Reception r;
  r.start_ms = std::max(frame.emitted_at_ms, channel_free_at_ms_);
  r.end_ms = r.start_ms + frame.airtime_ms;
  channel_free_at_ms_ = r.end_ms;
  channel_log_.push_back(r);
  return r;
}

IngestOutcome Gateway::receive(const UplinkFrame& frame, store::StoreCluster& store, registry::Mempool& mempool,
                               std::uint64_t now_ms, const ClientSignerLookup& signers) {
  if (!seen_.emplace(frame.device_id, frame.sequence).second) {
    ++duplicates_;
    throw Error(ErrorCode::DuplicateFrame,
                "device " + frame.device_id.hex() + " sequence " + std::to_string(frame.sequence));
  }
  ++received_;
  return proxy_.ingest(store, mempool, frame.device_id, frame.payload, now_ms, signers);
}

}  // namespace iotledger::lpwan
