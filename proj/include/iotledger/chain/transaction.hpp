#pragma once

#include <cstdint>
#include <string>

#include "iotledger/common/chunk_handle.hpp"
#include "iotledger/common/keys.hpp"

namespace iotledger::chain {

inline constexpr std::string_view kSetDeviceData = "set_device_data";

/// Registry call descriptor. set_device_data is the only state-changing
/// registry function, so the argument list is fixed.
struct RegistryCall {
  std::string function{kSetDeviceData};
  Address device_id;
  ChunkHandle filehash;

  bool operator==(const RegistryCall&) const = default;
};

RegistryCall set_device_data_call(const Address& device, const ChunkHandle& handle);

/// A signed registry transaction. The sender's public key travels with the
/// transaction because Ed25519 has no key recovery; the address must match it.
struct Transaction {
  Address sender;
  PublicKey sender_key;
  std::uint64_t nonce = 0;
  RegistryCall call;
  std::uint64_t gas_used = 0;
  Signature signature;

  /// Canonical encoding of every field except the signature.
  Bytes signing_bytes() const;
  /// Canonical encoding of every field.
  Bytes encode() const;
  Digest id() const { return sha256(encode()); }

  void sign_with(const KeyPair& key);
  bool signature_valid() const;

  bool operator==(const Transaction&) const = default;
};

Transaction make_signed_transaction(const KeyPair& key, std::uint64_t nonce, RegistryCall call,
                                    std::uint64_t gas);

}  // namespace iotledger::chain
