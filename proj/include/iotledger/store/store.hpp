#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "iotledger/common/chunk_handle.hpp"

namespace iotledger::store {

/// Replicated content-addressed chunk store.
///
/// Placement uses rendezvous (highest-random-weight) hashing: nodes are ranked
/// by H(handle || node id) and a chunk goes to the first r nodes in that
/// ranking that are up when it is first written. With every node up this is
/// simply the top r, so placement depends only on the node set and the handle.
/// The chosen replicas are recorded and never move.
class StoreCluster {
 public:
  /// Nodes are named "store-0" .. "store-(n-1)".
  StoreCluster(std::size_t node_count, std::size_t replication_factor);
  StoreCluster(std::vector<std::string> node_ids, std::size_t replication_factor);

  /// Stores `payload` on r replicas and returns its content handle. Re-putting
  /// known bytes returns the same handle and writes nothing. Throws
  /// InsufficientReplicas when fewer than r nodes are up.
  ChunkHandle put(ByteView payload);

  /// Bytes hashing to `handle`, from the first up replica holding a good copy.
  /// Throws NotFound (never stored) or Unavailable (no readable replica).
  Bytes get(const ChunkHandle& handle) const;

  /// Throws UnknownNode.
  void fail_node(const std::string& node_id);
  void recover_node(const std::string& node_id);
  bool is_up(const std::string& node_id) const;

  /// True iff every up replica's bytes hash to `handle`. Throws NotFound.
  bool verify_integrity(const ChunkHandle& handle) const;

  /// Overwrites bad up replicas with a verified copy from a good one. Returns
  /// the number of replicas rewritten. Throws NotFound / Unavailable.
  std::size_t repair(const ChunkHandle& handle);

  /// Fault injection: replace one replica's bytes.
  void corrupt_replica(const ChunkHandle& handle, const std::string& node_id, Bytes bytes);

  bool contains(const ChunkHandle& handle) const { return placement_.count(handle) != 0; }
  const std::vector<std::string>& placement(const ChunkHandle& handle) const;
  std::vector<std::string> rank_nodes(const ChunkHandle& handle) const;
  std::vector<ChunkHandle> handles() const;

  const std::vector<std::string>& node_ids() const { return node_ids_; }
  std::size_t replication_factor() const { return replication_; }
  std::size_t up_count() const;
  /// Total replica copies held across nodes.
  std::size_t stored_copies() const;

  /// Writes one file per chunk, named by hex handle, into `dir`.
  void export_to(const std::filesystem::path& dir) const;

 private:
  struct Node {
    bool up = true;
    std::map<ChunkHandle, Bytes> chunks;
  };

  Node& node(const std::string& id);
  const Node& node(const std::string& id) const;

  std::vector<std::string> node_ids_;
  std::map<std::string, Node> nodes_;
  std::size_t replication_;
  std::map<ChunkHandle, std::vector<std::string>> placement_;
};

struct FsckReport {
  std::size_t chunks = 0;
  std::vector<std::string> corrupt;  // file names whose bytes do not hash to the name
};

/// Checks every chunk file under `dir` against its content address.
FsckReport fsck_directory(const std::filesystem::path& dir);

/// Reads the chunk for `handle` from an exported directory. Throws NotFound.
Bytes read_chunk_file(const std::filesystem::path& dir, const ChunkHandle& handle);

}  // namespace iotledger::store
