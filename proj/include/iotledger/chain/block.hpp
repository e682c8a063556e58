#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "iotledger/chain/transaction.hpp"
#include "iotledger/common/uint256.hpp"

namespace iotledger::chain {

/// Genesis carries no proof; it commits to the scenario configuration instead.
struct GenesisSeal {
  Digest config_digest;
  bool operator==(const GenesisSeal&) const = default;
};

struct PowSeal {
  std::uint64_t nonce = 0;
  U256 threshold;
  bool operator==(const PowSeal&) const = default;
};

struct PosSeal {
  Address validator;
  PublicKey validator_key;
  std::uint64_t slot = 0;
  Signature signature;  // over the unsealed header digest
  bool operator==(const PosSeal&) const = default;
};

struct PbftVote {
  Address validator;
  PublicKey validator_key;
  Digest proposal;
  Signature signature;
  bool operator==(const PbftVote&) const = default;
};

/// Commit certificate: the quorum of identical votes for one proposal.
struct PbftSeal {
  std::uint64_t view = 0;
  std::vector<PbftVote> votes;
  bool operator==(const PbftSeal&) const = default;
};

using Seal = std::variant<GenesisSeal, PowSeal, PosSeal, PbftSeal>;

struct BlockHeader {
  Digest parent_hash;
  Digest tx_root;
  std::uint64_t timestamp = 0;  // seconds on the simulated clock
  std::uint64_t height = 0;
  Seal seal;

  bool operator==(const BlockHeader&) const = default;
};

struct Block {
  BlockHeader header;
  std::vector<Transaction> transactions;

  bool operator==(const Block&) const = default;
};

/// Canonical encoding of parent hash, tx root, timestamp and height; the
/// message that seals commit to.
Bytes unsealed_header_bytes(const BlockHeader& header);
Digest unsealed_header_digest(const BlockHeader& header);

Bytes encode_seal(const Seal& seal);

/// Digest over the canonical encoding of every header field, seal included.
Digest hash_header(const BlockHeader& header);

/// Bytes a PBFT validator signs when voting for `proposal`.
Bytes pbft_vote_message(const Digest& proposal);

}  // namespace iotledger::chain
