#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "iotledger/common/error.hpp"
#include "iotledger/common/rng.hpp"
#include "iotledger/store/store.hpp"

using namespace iotledger;
using namespace iotledger::store;

namespace {

Bytes payload(std::uint64_t i, std::size_t len = 12) {
  DeterministicRng rng(1000 + i);
  Bytes b(len);
  for (auto& x : b) x = static_cast<std::uint8_t>(rng.next());
  return b;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Malformed;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("iotledger-store-" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("put/get round trip and idempotence") {
  StoreCluster c(5, 3);
  Bytes p = payload(1);
  ChunkHandle h = c.put(p);
  CHECK(h == content_handle(p));
  CHECK(c.get(h) == p);
  CHECK(c.stored_copies() == 3);
  CHECK(c.put(p) == h);
  CHECK(c.stored_copies() == 3);

  ChunkHandle empty = c.put(Bytes{});
  CHECK(empty == content_handle(Bytes{}));
  CHECK(c.get(empty).empty());
  CHECK(code_of([&] { c.get(content_handle(payload(99))); }) == ErrorCode::NotFound);
}

TEST_CASE("1000 random payloads give 1000 distinct handles") {
  StoreCluster c(5, 3);
  std::set<ChunkHandle> handles;
  for (std::uint64_t i = 0; i < 1000; ++i) handles.insert(c.put(payload(i, 32)));
  CHECK(handles.size() == 1000);
  CHECK(c.handles().size() == 1000);
}

TEST_CASE("placement: r distinct nodes, top of the rendezvous ranking, reproducible") {
  StoreCluster a(7, 3), b(7, 3);
  for (std::uint64_t i = 0; i < 50; ++i) {
    ChunkHandle h = a.put(payload(i));
    b.put(payload(i));
    const auto& place = a.placement(h);
    CHECK(place.size() == 3);
    CHECK(std::set<std::string>(place.begin(), place.end()).size() == 3);
    auto ranked = a.rank_nodes(h);
    CHECK(std::vector<std::string>(ranked.begin(), ranked.begin() + 3) == place);
    CHECK(b.placement(h) == place);
  }
}

TEST_CASE("every (r-1)-subset failure leaves all chunks readable; r down is Unavailable") {
  StoreCluster c(5, 3);
  std::vector<ChunkHandle> handles;
  for (std::uint64_t i = 0; i < 10; ++i) handles.push_back(c.put(payload(i)));
  const auto ids = c.node_ids();

  for (std::size_t x = 0; x < ids.size(); ++x) {
    for (std::size_t y = x + 1; y < ids.size(); ++y) {
      c.fail_node(ids[x]);
      c.fail_node(ids[y]);
      for (std::size_t i = 0; i < handles.size(); ++i) CHECK(c.get(handles[i]) == payload(i));
      c.recover_node(ids[x]);
      c.recover_node(ids[y]);
    }
  }

  for (const auto& h : handles) {
    for (const auto& n : c.placement(h)) c.fail_node(n);
    CHECK(code_of([&] { c.get(h); }) == ErrorCode::Unavailable);
    for (const auto& n : c.placement(h)) c.recover_node(n);
    CHECK_NOTHROW(c.get(h));
  }
}

TEST_CASE("writes need r nodes up and place among the ones that are") {
  StoreCluster c(4, 3);
  c.fail_node("store-0");
  ChunkHandle h = c.put(payload(1));
  auto place = c.placement(h);
  CHECK(std::find(place.begin(), place.end(), "store-0") == place.end());
  c.fail_node("store-1");
  CHECK(code_of([&] { c.put(payload(2)); }) == ErrorCode::InsufficientReplicas);
  CHECK_FALSE(c.contains(content_handle(payload(2))));
  CHECK(code_of([&] { c.fail_node("store-9"); }) == ErrorCode::UnknownNode);
  CHECK_THROWS_AS(StoreCluster(2, 3), std::invalid_argument);
}

TEST_CASE("integrity check, corruption and repair") {
  StoreCluster c(5, 3);
  Bytes p = payload(3);
  ChunkHandle h = c.put(p);
  CHECK(c.verify_integrity(h));
  const std::string bad = c.placement(h)[0];
  c.corrupt_replica(h, bad, Bytes{1, 2, 3});
  CHECK_FALSE(c.verify_integrity(h));
  CHECK(c.get(h) == p);
  CHECK(c.repair(h) == 1);
  CHECK(c.verify_integrity(h));
  CHECK(code_of([&] { (void)c.verify_integrity(content_handle(payload(77))); }) == ErrorCode::NotFound);

  for (const auto& n : c.placement(h)) c.corrupt_replica(h, n, Bytes{9});
  CHECK(code_of([&] { c.get(h); }) == ErrorCode::Unavailable);
}

TEST_CASE("export, fsck and chunk file reads") {
  StoreCluster c(3, 2);
  std::vector<ChunkHandle> hs;
  for (std::uint64_t i = 0; i < 5; ++i) hs.push_back(c.put(payload(i)));
  auto dir = scratch("export");
  c.export_to(dir);
  auto ok = fsck_directory(dir);
  CHECK(ok.chunks == 5);
  CHECK(ok.corrupt.empty());
  CHECK(read_chunk_file(dir, hs[2]) == payload(2));

  {
    std::ofstream out(dir / hs[1].hex(), std::ios::binary | std::ios::trunc);
    out << "tampered";
  }
  auto bad = fsck_directory(dir);
  REQUIRE(bad.corrupt.size() == 1);
  CHECK(bad.corrupt[0] == hs[1].hex());
  std::filesystem::remove(dir / hs[3].hex());
  CHECK(code_of([&] { read_chunk_file(dir, hs[3]); }) == ErrorCode::NotFound);
  std::filesystem::remove_all(dir);
}
