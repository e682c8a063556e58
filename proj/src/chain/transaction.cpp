#include "iotledger/chain/transaction.hpp"

namespace iotledger::chain {

RegistryCall set_device_data_call(const Address& device, const ChunkHandle& handle) {
  return RegistryCall{std::string(kSetDeviceData), device, handle};
}

namespace {

Encoder& put_unsigned(Encoder& enc, const Transaction& tx) {
  return enc.put(tx.sender)
      .put(tx.sender_key)
      .put_u64(tx.nonce)
      .put(tx.call.function)
      .put(tx.call.device_id)
      .put(tx.call.filehash)
      .put_u64(tx.gas_used);
}

}  // namespace

Bytes Transaction::signing_bytes() const {
  Encoder enc;
  put_unsigned(enc, *this);
  return enc.take();
}

Bytes Transaction::encode() const {
  Encoder enc;
  put_unsigned(enc, *this).put(signature);
  return enc.take();
}

void Transaction::sign_with(const KeyPair& key) {
  sender = key.address();
  sender_key = key.public_key();
  signature = key.sign(signing_bytes());
}

bool Transaction::signature_valid() const {
  if (address_of(sender_key) != sender) return false;
  return verify_signature(sender_key, signing_bytes(), signature);
}

Transaction make_signed_transaction(const KeyPair& key, std::uint64_t nonce, RegistryCall call,
                                    std::uint64_t gas) {
  Transaction tx;
  tx.nonce = nonce;
  tx.call = std::move(call);
  tx.gas_used = gas;
  tx.sign_with(key);
  return tx;
}

}  // namespace iotledger::chain
