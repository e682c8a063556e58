#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "iotledger/chain/chain_state.hpp"
#include "iotledger/chain/merkle.hpp"
#include "iotledger/common/rng.hpp"
#include "iotledger/registry/gas.hpp"
#include "iotledger/registry/registry.hpp"

namespace testkit {

using namespace iotledger;

inline KeyPair key(std::uint64_t i) { return KeyPair::from_seed(derive_seed(0x7e57, "test-key", i)); }

inline ChunkHandle handle(std::uint64_t i) {
  return ChunkHandle::from_span(derive_seed(0x7e57, "test-handle", i).view());
}

inline Address device(std::uint64_t i) { return key(1000 + i).address(); }

inline chain::Transaction tx(std::uint64_t signer, std::uint64_t nonce, std::uint64_t dev = 0,
                             std::uint64_t h = 0, std::uint64_t gas = registry::kDefaultTxGas) {
  return chain::make_signed_transaction(key(signer), nonce, chain::set_device_data_call(device(dev), handle(h)), gas);
}

/// Distinct signed transactions from one sender.
inline std::vector<chain::Transaction> txs(std::size_t n, std::uint64_t signer = 1) {
  std::vector<chain::Transaction> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(tx(signer, i, i % 7, i));
  return out;
}

/// Accepts every seal; for exercising the chain rules in isolation.
class AcceptAll final : public chain::SealVerifier {
 public:
  explicit AcceptAll(bool forks = true) : forks_(forks) {}
  std::string_view name() const override { return "accept-all"; }
  bool allows_forks() const override { return forks_; }
  bool verify_seal(const chain::BlockHeader&, const chain::BlockHeader&, const chain::HeaderLookup&) const override {
    return true;
  }

 private:
  bool forks_;
};

inline chain::Block genesis_block() {
  chain::Block g;
  g.header.seal = chain::GenesisSeal{derive_seed(0x7e57, "genesis")};
  return g;
}

/// Child of `parent` carrying `transactions`, with a consistent tx root.
inline chain::Block child(const chain::BlockHeader& parent, std::vector<chain::Transaction> transactions,
                          std::uint64_t salt = 0) {
  chain::Block b;
  b.header.parent_hash = chain::hash_header(parent);
  b.header.height = parent.height + 1;
  b.header.timestamp = parent.timestamp + 14;
  b.header.tx_root = chain::block_tx_root(transactions);
  b.header.seal = chain::PowSeal{salt, U256::max()};
  b.transactions = std::move(transactions);
  return b;
}

inline chain::ChainParams params(std::uint64_t gas_limit = 4'712'388) { return chain::ChainParams{gas_limit}; }

// Single-bit mutations over every stored field of a transaction, in field
// order: sender, sender_key, nonce, function, device_id, filehash, gas_used,
// signature.

namespace detail {
template <class F>
void for_each_field(chain::Transaction& t, F&& f) {
  f(t.sender.bytes.data(), t.sender.bytes.size());
  f(t.sender_key.bytes.data(), t.sender_key.bytes.size());
  f(reinterpret_cast<std::uint8_t*>(&t.nonce), sizeof t.nonce);
  f(reinterpret_cast<std::uint8_t*>(t.call.function.data()), t.call.function.size());
  f(t.call.device_id.bytes.data(), t.call.device_id.bytes.size());
  f(t.call.filehash.bytes.data(), t.call.filehash.bytes.size());
  f(reinterpret_cast<std::uint8_t*>(&t.gas_used), sizeof t.gas_used);
  f(t.signature.bytes.data(), t.signature.bytes.size());
}
}  // namespace detail

inline std::size_t tx_bit_count(chain::Transaction t) {
  std::size_t bits = 0;
  detail::for_each_field(t, [&](std::uint8_t*, std::size_t n) { bits += 8 * n; });
  return bits;
}

inline chain::Transaction flip_tx_bit(chain::Transaction t, std::size_t bit) {
  bool done = false;
  detail::for_each_field(t, [&](std::uint8_t* p, std::size_t n) {
    if (done) return;
    if (bit < 8 * n) {
      p[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
      done = true;
    } else {
      bit -= 8 * n;
    }
  });
  return t;
}

// Hand-executed set_device_data transcripts for the deduplicated registry.
// Devices are letters, handles small integers.

struct Write {
  char device;
  std::uint64_t ts;
  std::uint64_t handle;
  std::uint64_t expect_index;
};

struct Transcript {
  std::string name;
  std::vector<Write> writes;
  std::uint64_t expect_count;
  std::vector<char> expect_order;  // get_device_at_index(0..count-1)
  // Expected (device, timestamps) and (device, ts) -> handle after the last write.
  std::vector<std::pair<char, std::vector<std::uint64_t>>> expect_timestamps;
  std::vector<std::tuple<char, std::uint64_t, std::uint64_t>> expect_data;
};

inline Address letter(char c) { return device(static_cast<std::uint64_t>(c)); }

inline std::vector<Transcript> registry_transcripts() {
  return {
      {"first, second and repeat device",
       {{'D', 100, 1, 0}, {'E', 101, 2, 1}, {'D', 102, 3, 0}},
       2,
       {'D', 'E'},
       {{'D', {100, 102}}, {'E', {101}}},
       {{'D', 100, 1}, {'D', 102, 3}, {'E', 101, 2}}},
      {"same-timestamp overwrite",
       {{'D', 100, 1, 0}, {'D', 100, 2, 0}, {'E', 100, 3, 1}},
       2,
       {'D', 'E'},
       {{'D', {100}}, {'E', {100}}},
       {{'D', 100, 2}, {'E', 100, 3}}},
      {"one device writing thrice among others",
       {{'A', 10, 1, 0}, {'B', 11, 2, 1}, {'A', 12, 3, 0}, {'C', 12, 4, 2}, {'A', 13, 5, 0}, {'B', 13, 6, 1}},
       3,
       {'A', 'B', 'C'},
       {{'A', {10, 12, 13}}, {'B', {11, 13}}, {'C', {12}}},
       {{'A', 10, 1}, {'A', 12, 3}, {'A', 13, 5}, {'B', 11, 2}, {'B', 13, 6}, {'C', 12, 4}}},
  };
}

/// Runs a transcript, returning the first mismatch or an empty string.
inline std::string run_transcript(const Transcript& t) {
  registry::Registry reg(registry::RegistryMode::Deduplicated);
  for (std::size_t i = 0; i < t.writes.size(); ++i) {
    const Write& w = t.writes[i];
    auto r = reg.set_device_data(letter(w.device), handle(w.handle), w.ts);
    registry::LogAction want{letter(w.device), w.expect_index, w.ts, handle(w.handle)};
    if (r.index != w.expect_index || r.timestamp != w.ts || r.event != want) {
      return t.name + ": write " + std::to_string(i) + " returned index " + std::to_string(r.index);
    }
  }
  if (reg.get_device_count() != t.expect_count) return t.name + ": device count";
  for (std::size_t i = 0; i < t.expect_order.size(); ++i) {
    if (reg.get_device_at_index(i) != letter(t.expect_order[i])) return t.name + ": order at " + std::to_string(i);
  }
  for (const auto& [d, ts] : t.expect_timestamps) {
    if (reg.get_device_timestamps(letter(d)) != ts) return t.name + ": timestamps of " + std::string(1, d);
  }
  for (const auto& [d, ts, h] : t.expect_data) {
    if (reg.get_device_data(letter(d), ts) != handle(h)) return t.name + ": data at " + std::to_string(ts);
  }
  if (!reg.invariants_hold()) return t.name + ": invariants";
  return {};
}

}  // namespace testkit
