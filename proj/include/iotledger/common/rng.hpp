#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

#include "iotledger/common/bytes.hpp"

namespace iotledger {

/// Domain-separated child seed: SHA-256 over the canonical encoding of the
/// root seed, a label and an index. All identities and draws in a run are
/// derived this way.
Digest derive_seed(std::uint64_t root, std::string_view label, std::uint64_t index = 0);
Digest derive_seed(const Digest& parent, std::string_view label, std::uint64_t index = 0);

std::uint64_t digest_prefix_u64(const Digest& d);

/// Unbiased-enough uniform draw in [0, bound) via 128-bit multiply.
inline std::uint64_t scale_to(std::uint64_t random, std::uint64_t bound) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(random) * bound) >> 64);
}

/// Seeded stream for simulation knobs (packet loss and similar). The engine's
/// output sequence is fixed by the standard; only our own mappings are used on
/// top of it so results do not depend on the standard library's distributions.
class DeterministicRng {
 public:
  explicit DeterministicRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  std::uint64_t uniform(std::uint64_t bound) { return scale_to(engine_(), bound); }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return p > 0.0 && unit() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace iotledger
