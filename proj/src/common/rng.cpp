#include "iotledger/common/rng.hpp"

namespace iotledger {

Digest derive_seed(std::uint64_t root, std::string_view label, std::uint64_t index) {
  return Encoder{}.put_u64(root).put(label).put_u64(index).digest();
}

Digest derive_seed(const Digest& parent, std::string_view label, std::uint64_t index) {
  return Encoder{}.put(parent).put(label).put_u64(index).digest();
}

std::uint64_t digest_prefix_u64(const Digest& d) { return read_u64_be(d.view()); }

}  // namespace iotledger
