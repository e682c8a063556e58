#include "iotledger/common/uint256.hpp"

#include <cmath>
#include <stdexcept>

namespace iotledger {

using u128 = unsigned __int128;

U256 U256::max() {
  U256 v;
  v.limbs_ = {~0ULL, ~0ULL, ~0ULL, ~0ULL};
  return v;
}

U256 U256::pow2(unsigned exponent) {
  if (exponent >= 256) throw std::out_of_range("U256::pow2 exponent");
  U256 v;
  v.limbs_[exponent / 64] = 1ULL << (exponent % 64);
  return v;
}

U256 U256::from_digest(const Digest& d) {
  U256 v;
  for (int limb = 0; limb < 4; ++limb) {
    v.limbs_[3 - limb] = read_u64_be(ByteView{d.bytes.data() + 8 * limb, 8});
  }
  return v;
}

U256 U256::from_hex(std::string_view text) { return from_digest(Digest::from_hex(text)); }

Digest U256::to_digest() const {
  Bytes be;
  for (int limb = 3; limb >= 0; --limb) append_u64_be(be, limbs_[limb]);
  return Digest::from_span(be);
}

unsigned U256::bit_length() const {
  for (int i = 3; i >= 0; --i) {
    if (limbs_[i] != 0) return static_cast<unsigned>(64 * i + 64 - __builtin_clzll(limbs_[i]));
  }
  return 0;
}

U256 U256::div(std::uint64_t divisor) const {
  if (divisor == 0) throw std::domain_error("U256::div by zero");
  U256 q;
  u128 rem = 0;
  for (int i = 3; i >= 0; --i) {
    u128 cur = (rem << 64) | limbs_[i];
    q.limbs_[i] = static_cast<std::uint64_t>(cur / divisor);
    rem = cur % divisor;
  }
  return q;
}

U256 U256::mul_div(std::uint64_t num, std::uint64_t den) const {
  if (den == 0) throw std::domain_error("U256::mul_div by zero");
  std::array<std::uint64_t, 5> wide{};
  u128 carry = 0;
  for (int i = 0; i < 4; ++i) {
    u128 p = static_cast<u128>(limbs_[i]) * num + carry;
    wide[i] = static_cast<std::uint64_t>(p);
    carry = p >> 64;
  }
  wide[4] = static_cast<std::uint64_t>(carry);

  std::array<std::uint64_t, 5> q{};
  u128 rem = 0;
  for (int i = 4; i >= 0; --i) {
    u128 cur = (rem << 64) | wide[i];
    q[i] = static_cast<std::uint64_t>(cur / den);
    rem = cur % den;
  }
  if (q[4] != 0) return max();
  U256 out;
  for (int i = 0; i < 4; ++i) out.limbs_[i] = q[i];
  return out;
}

double U256::to_double() const {
  double v = 0.0;
  for (int i = 3; i >= 0; --i) v = v * 18446744073709551616.0 + static_cast<double>(limbs_[i]);
  return v;
}

}  // namespace iotledger
