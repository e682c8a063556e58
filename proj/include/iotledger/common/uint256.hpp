#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>

#include "iotledger/common/bytes.hpp"

namespace iotledger {

/// Unsigned 256-bit integer, just wide enough for proof-of-work targets.
/// Limb 0 is the least significant.
class U256 {
 public:
  constexpr U256() = default;
  constexpr explicit U256(std::uint64_t v) : limbs_{v, 0, 0, 0} {}

  static U256 max();
  static U256 pow2(unsigned exponent);  // exponent < 256
  static U256 from_digest(const Digest& d);  // big-endian interpretation
  static U256 from_hex(std::string_view text);

  Digest to_digest() const;  // big-endian
  std::string hex() const { return to_digest().hex(); }

  bool is_zero() const { return limbs_[0] == 0 && limbs_[1] == 0 && limbs_[2] == 0 && limbs_[3] == 0; }
  std::uint64_t low64() const { return limbs_[0]; }
  unsigned bit_length() const;

  /// floor(this / divisor); divisor must be non-zero.
  U256 div(std::uint64_t divisor) const;

  /// floor(this * num / den) computed with a 320-bit intermediate; saturates
  /// at max() when the result does not fit.
  U256 mul_div(std::uint64_t num, std::uint64_t den) const;

  /// Approximate value as a double, for reporting only.
  double to_double() const;

  friend std::strong_ordering operator<=>(const U256& a, const U256& b) {
    for (int i = 3; i >= 0; --i) {
      if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] <=> b.limbs_[i];
    }
    return std::strong_ordering::equal;
  }
  friend bool operator==(const U256& a, const U256& b) = default;

 private:
  std::array<std::uint64_t, 4> limbs_{};
};

}  // namespace iotledger
