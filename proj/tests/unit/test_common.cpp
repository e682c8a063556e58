#include <doctest.h>

#include <set>

#include "iotledger/common/bytes.hpp"
#include "iotledger/common/chunk_handle.hpp"
#include "iotledger/common/error.hpp"
#include "iotledger/common/keys.hpp"
#include "iotledger/common/rng.hpp"
#include "iotledger/common/uint256.hpp"

using namespace iotledger;

TEST_CASE("hex round trip and strictness") {
  Bytes b{0x00, 0x01, 0xab, 0xff};
  CHECK(to_hex(b) == "0001abff");
  CHECK(from_hex("0001abff") == b);
  CHECK_THROWS(from_hex("0001ABFF"));
  CHECK_THROWS(from_hex("abc"));
  CHECK_THROWS(from_hex("zz"));
  CHECK(from_hex("").empty());
}

TEST_CASE("sha256 matches its incremental form") {
  Bytes data(1000);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = static_cast<std::uint8_t>(i * 7);
  Sha256 h;
  h.update(ByteView(data).first(300)).update(ByteView(data).subspan(300));
  CHECK(h.finish() == sha256(data));
  CHECK(hash_function_name() == "sha256");
}

TEST_CASE("encoder is length-prefixed so field boundaries matter") {
  Encoder a, b;
  a.put(std::string_view("ab")).put(std::string_view("c"));
  b.put(std::string_view("a")).put(std::string_view("bc"));
  CHECK(a.bytes() != b.bytes());
  CHECK(a.bytes().size() == 4 + 2 + 4 + 1);

  Encoder n;
  n.put_u64(0x0102030405060708ULL);
  CHECK(n.bytes() == Bytes{0, 0, 0, 8, 1, 2, 3, 4, 5, 6, 7, 8});
  CHECK(read_u64_be(ByteView(n.bytes()).subspan(4)) == 0x0102030405060708ULL);
}

TEST_CASE("fixed bytes reject wrong lengths") {
  CHECK_THROWS_AS(Digest::from_span(Bytes(31)), std::invalid_argument);
  CHECK(Digest::from_hex(std::string(64, '0')).is_zero());
}

TEST_CASE("content handle is a pure function of the bytes") {
  Bytes p{1, 2, 3};
  CHECK(content_handle(p) == content_handle(Bytes{1, 2, 3}));
  CHECK(content_handle(p) != content_handle(Bytes{1, 2, 4}));
  CHECK(content_handle(Bytes{}).hex() == sha256(Bytes{}).hex());
}

TEST_CASE("keys are reproducible from their seed and signatures verify") {
  auto k1 = KeyPair::from_seed(derive_seed(1, "k"));
  auto k2 = KeyPair::from_seed(derive_seed(1, "k"));
  auto k3 = KeyPair::from_seed(derive_seed(1, "k", 1));
  CHECK(k1.public_key() == k2.public_key());
  CHECK(k1.address() == address_of(k1.public_key()));
  CHECK(k1.address() != k3.address());

  Bytes msg{9, 8, 7};
  Signature s = k1.sign(msg);
  CHECK(verify_signature(k1.public_key(), msg, s));
  CHECK_FALSE(verify_signature(k3.public_key(), msg, s));
  msg[0] ^= 1;
  CHECK_FALSE(verify_signature(k1.public_key(), msg, s));
  CHECK(signature_scheme_name() == "ed25519");
}

TEST_CASE("addresses of distinct keys do not collide at desk scale") {
  std::set<Address> seen;
  for (std::uint64_t i = 0; i < 500; ++i) seen.insert(KeyPair::from_seed(derive_seed(2, "k", i)).address());
  CHECK(seen.size() == 500);
}

TEST_CASE("derive_seed separates labels, indices and roots") {
  CHECK(derive_seed(1, "a", 0) != derive_seed(1, "a", 1));
  CHECK(derive_seed(1, "a", 0) != derive_seed(1, "b", 0));
  CHECK(derive_seed(1, "a", 0) != derive_seed(2, "a", 0));
  CHECK(derive_seed(derive_seed(1, "a"), "x") == derive_seed(derive_seed(1, "a"), "x"));
}

TEST_CASE("scale_to stays in range and spans it") {
  DeterministicRng rng(5);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    auto v = rng.uniform(10);
    CHECK(v < 10);
    seen.insert(v);
  }
  CHECK(seen.size() == 10);
  CHECK(scale_to(~0ULL, 7) == 6);
  CHECK(scale_to(0, 7) == 0);
  CHECK_FALSE(rng.bernoulli(0.0));
}

TEST_CASE("U256 arithmetic") {
  CHECK(U256::pow2(0) == U256(1));
  CHECK(U256::pow2(255).bit_length() == 256);
  CHECK(U256::max().bit_length() == 256);
  CHECK(U256::pow2(200).div(2) == U256::pow2(199));
  CHECK(U256::pow2(200).mul_div(4, 1) == U256::pow2(202));
  CHECK(U256::pow2(200).mul_div(3, 3) == U256::pow2(200));
  CHECK(U256::pow2(254).mul_div(8, 1) == U256::max());
  CHECK(U256(1000).mul_div(7, 3) == U256(2333));
  CHECK(U256::from_digest(U256::pow2(248).to_digest()) == U256::pow2(248));
  CHECK(U256::from_hex(U256(0xabcdef).hex()) == U256(0xabcdef));
  CHECK(U256(5) < U256::pow2(64));
  CHECK(U256::pow2(64).low64() == 0);
}

TEST_CASE("error codes name themselves") {
  Error e(ErrorCode::NotFound, "x");
  CHECK(e.code() == ErrorCode::NotFound);
  CHECK(std::string(e.what()).find("NotFound") != std::string::npos);
}
