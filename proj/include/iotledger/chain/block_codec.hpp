#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "iotledger/chain/block.hpp"

namespace iotledger::chain {

// One JSON object per block per line. Digests, keys and signatures are
// lowercase hex; transactions are positional arrays:
//
//   [sender, sender_key, nonce, function, device_id, filehash, gas_used, signature]
//
// Decoding is strict: missing fields, extra array elements, non-canonical hex
// and wrong types all throw Malformed.

nlohmann::json transaction_to_json(const Transaction& tx);
Transaction transaction_from_json(const nlohmann::json& j);

nlohmann::json header_to_json(const BlockHeader& header);
BlockHeader header_from_json(const nlohmann::json& j);

nlohmann::json block_to_json(const Block& block);
Block block_from_json(const nlohmann::json& j);

std::string block_to_line(const Block& block);
Block block_from_line(const std::string& line);

}  // namespace iotledger::chain
