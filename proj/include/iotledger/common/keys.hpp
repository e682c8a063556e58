#pragma once

#include <array>

#include "iotledger/common/bytes.hpp"

namespace iotledger {

using Address = FixedBytes<20, struct AddressTag>;
using PublicKey = FixedBytes<32, struct PublicKeyTag>;
using Signature = FixedBytes<64, struct SignatureTag>;

std::string_view signature_scheme_name();

/// Last 20 bytes of SHA-256 over the public key.
Address address_of(const PublicKey& key);

bool verify_signature(const PublicKey& key, ByteView message, const Signature& sig);

/// Ed25519 key pair. Generation is a pure function of the 32-byte seed so that
/// every identity in a run is reproducible from the scenario seed.
class KeyPair {
 public:
  static KeyPair from_seed(const Digest& seed);

  const PublicKey& public_key() const { return public_key_; }
  const Address& address() const { return address_; }
  Signature sign(ByteView message) const;

 private:
  KeyPair() = default;

  PublicKey public_key_;
  Address address_;
  std::array<std::uint8_t, 64> secret_{};
};

}  // namespace iotledger
