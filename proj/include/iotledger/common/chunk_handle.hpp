#pragma once

#include "iotledger/common/bytes.hpp"

namespace iotledger {

/// Content digest of a stored payload; the registry's "file hash".
using ChunkHandle = FixedBytes<32, struct ChunkHandleTag>;

inline ChunkHandle content_handle(ByteView payload) {
  return ChunkHandle::from_span(sha256(payload).view());
}

}  // namespace iotledger
