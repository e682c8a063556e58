#include "iotledger/common/keys.hpp"

#include <sodium.h>

#include <stdexcept>

namespace iotledger {

std::string_view signature_scheme_name() { return "ed25519"; }

Address address_of(const PublicKey& key) {
  Digest d = sha256(key.view());
  Address a;
  std::memcpy(a.bytes.data(), d.bytes.data() + (Digest::kSize - Address::kSize), Address::kSize);
  return a;
}

bool verify_signature(const PublicKey& key, ByteView message, const Signature& sig) {
  return crypto_sign_verify_detached(sig.bytes.data(), message.data(), message.size(),
                                     key.bytes.data()) == 0;
}

KeyPair KeyPair::from_seed(const Digest& seed) {
  sha256(ByteView{});  // initialises libsodium
  KeyPair kp;
  if (crypto_sign_seed_keypair(kp.public_key_.bytes.data(), kp.secret_.data(), seed.bytes.data()) != 0) {
    throw std::runtime_error("ed25519 key derivation failed");
  }
  kp.address_ = address_of(kp.public_key_);
  return kp;
}

Signature KeyPair::sign(ByteView message) const {
  Signature sig;
  crypto_sign_detached(sig.bytes.data(), nullptr, message.data(), message.size(), secret_.data());
  return sig;
}

}  // namespace iotledger
