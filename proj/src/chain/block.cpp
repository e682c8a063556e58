#include "iotledger/chain/block.hpp"

namespace iotledger::chain {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

Bytes unsealed_header_bytes(const BlockHeader& header) {
  return Encoder{}
      .put(header.parent_hash)
      .put(header.tx_root)
      .put_u64(header.timestamp)
      .put_u64(header.height)
      .take();
}

Digest unsealed_header_digest(const BlockHeader& header) { return sha256(unsealed_header_bytes(header)); }

Bytes encode_seal(const Seal& seal) {
  Encoder enc;
  enc.put_u64(seal.index());
  std::visit(Overloaded{
                 [&](const GenesisSeal& s) { enc.put(s.config_digest); },
                 [&](const PowSeal& s) { enc.put_u64(s.nonce).put(s.threshold.to_digest()); },
                 [&](const PosSeal& s) {
                   enc.put(s.validator).put(s.validator_key).put_u64(s.slot).put(s.signature);
                 },
                 [&](const PbftSeal& s) {
                   enc.put_u64(s.view).put_u64(s.votes.size());
                   for (const auto& v : s.votes) {
                     enc.put(v.validator).put(v.validator_key).put(v.proposal).put(v.signature);
                   }
                 },
             },
             seal);
  return enc.take();
}

Digest hash_header(const BlockHeader& header) {
  return Encoder{}.put(unsealed_header_bytes(header)).put(encode_seal(header.seal)).digest();
}

Bytes pbft_vote_message(const Digest& proposal) {
  return Encoder{}.put("pbft-commit").put(proposal).take();
}

}  // namespace iotledger::chain
