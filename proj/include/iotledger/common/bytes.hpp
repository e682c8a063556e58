#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <sodium.h>

namespace iotledger {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

std::string to_hex(ByteView data);

// Lowercase only. Uppercase digits are rejected so that every value has
// exactly one textual form.
Bytes from_hex(std::string_view text);

inline ByteView as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

/// Fixed-width byte string with a phantom tag so that digests, addresses,
/// keys and signatures cannot be mixed up.
template <std::size_t N, typename Tag>
struct FixedBytes {
  static constexpr std::size_t kSize = N;
  std::array<std::uint8_t, N> bytes{};

  auto operator<=>(const FixedBytes&) const = default;
  bool operator==(const FixedBytes&) const = default;

  ByteView view() const { return {bytes.data(), N}; }
  std::string hex() const { return to_hex(view()); }
  bool is_zero() const {
    for (auto b : bytes) {
      if (b != 0) return false;
    }
    return true;
  }

  static FixedBytes from_span(ByteView data);
  static FixedBytes from_hex(std::string_view text);
};

template <std::size_t N, typename Tag>
FixedBytes<N, Tag> FixedBytes<N, Tag>::from_span(ByteView data) {
  FixedBytes out;
  if (data.size() != N) {
    throw std::invalid_argument("fixed bytes: expected " + std::to_string(N) + " bytes, got " +
                                std::to_string(data.size()));
  }
  std::memcpy(out.bytes.data(), data.data(), N);
  return out;
}

template <std::size_t N, typename Tag>
FixedBytes<N, Tag> FixedBytes<N, Tag>::from_hex(std::string_view text) {
  return from_span(iotledger::from_hex(text));
}

using Digest = FixedBytes<32, struct DigestTag>;

std::string_view hash_function_name();

Digest sha256(ByteView data);

/// Incremental SHA-256.
class Sha256 {
 public:
  Sha256();
  Sha256& update(ByteView data);
  Sha256& update(std::uint8_t byte) { return update(ByteView{&byte, 1}); }
  Digest finish();

 private:
  crypto_hash_sha256_state state_{};
};

/// Canonical encoding: every field is a 4-byte big-endian length followed by
/// the field bytes, in declaration order. Integers are 8-byte big-endian.
class Encoder {
 public:
  Encoder& put(ByteView field);
  Encoder& put(std::string_view field) { return put(as_bytes(field)); }
  Encoder& put_u64(std::uint64_t value);
  template <std::size_t N, typename Tag>
  Encoder& put(const FixedBytes<N, Tag>& field) {
    return put(field.view());
  }

  const Bytes& bytes() const { return out_; }
  Bytes take() { return std::move(out_); }
  Digest digest() const { return sha256(out_); }

 private:
  Bytes out_;
};

void append_u64_be(Bytes& out, std::uint64_t value);
std::uint64_t read_u64_be(ByteView data);

}  // namespace iotledger

template <std::size_t N, typename Tag>
struct std::hash<iotledger::FixedBytes<N, Tag>> {
  std::size_t operator()(const iotledger::FixedBytes<N, Tag>& v) const noexcept {
    std::size_t h = 0;
    std::memcpy(&h, v.bytes.data(), sizeof(h) < N ? sizeof(h) : N);
    return h;
  }
};
