#include "iotledger/store/store.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>

#include "iotledger/common/error.hpp"
#include "iotledger/common/rng.hpp"

namespace iotledger::store {

namespace {

std::vector<std::string> numbered_ids(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("store-" + std::to_string(i));
  return ids;
}

std::uint64_t hrw_score(const ChunkHandle& handle, const std::string& node_id) {
  return digest_prefix_u64(Encoder{}.put(handle).put(node_id).digest());
}

}  // namespace

StoreCluster::StoreCluster(std::size_t node_count, std::size_t replication_factor)
    : StoreCluster(numbered_ids(node_count), replication_factor) {}

StoreCluster::StoreCluster(std::vector<std::string> node_ids, std::size_t replication_factor)
    : node_ids_(std::move(node_ids)), replication_(replication_factor) {
  if (replication_ == 0) throw std::invalid_argument("replication factor must be positive");
  if (replication_ > node_ids_.size()) throw std::invalid_argument("replication factor exceeds node count");
  for (const auto& id : node_ids_) {
    if (!nodes_.emplace(id, Node{}).second) throw std::invalid_argument("duplicate store node " + id);
  }
}

StoreCluster::Node& StoreCluster::node(const std::string& id) {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw Error(ErrorCode::UnknownNode, id);
  return it->second;
}

const StoreCluster::Node& StoreCluster::node(const std::string& id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw Error(ErrorCode::UnknownNode, id);
  return it->second;
}

std::vector<std::string> StoreCluster::rank_nodes(const ChunkHandle& handle) const {
  std::vector<std::pair<std::uint64_t, std::string>> scored;
  for (const auto& id : node_ids_) scored.emplace_back(hrw_score(handle, id), id);
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::vector<std::string> ranked;
  for (auto& [score, id] : scored) ranked.push_back(std::move(id));
  return ranked;
}

std::size_t StoreCluster::up_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const auto& kv) { return kv.second.up; }));
}

ChunkHandle StoreCluster::put(ByteView payload) {
  ChunkHandle handle = content_handle(payload);
  if (contains(handle)) return handle;
  if (up_count() < replication_) {
    throw Error(ErrorCode::InsufficientReplicas,
                std::to_string(up_count()) + " nodes up, need " + std::to_string(replication_));
  }
  std::vector<std::string> chosen;
  for (const auto& id : rank_nodes(handle)) {
    if (chosen.size() == replication_) break;
    if (node(id).up) chosen.push_back(id);
  }
  for (const auto& id : chosen) node(id).chunks.emplace(handle, Bytes(payload.begin(), payload.end()));
  placement_.emplace(handle, std::move(chosen));
  return handle;
}

Bytes StoreCluster::get(const ChunkHandle& handle) const {
  auto it = placement_.find(handle);
  if (it == placement_.end()) throw Error(ErrorCode::NotFound, handle.hex());
  for (const auto& id : it->second) {
    const Node& n = node(id);
    if (!n.up) continue;
    auto c = n.chunks.find(handle);
    if (c != n.chunks.end() && content_handle(c->second) == handle) return c->second;
  }
  throw Error(ErrorCode::Unavailable, "no readable replica for " + handle.hex());
}

void StoreCluster::fail_node(const std::string& node_id) { node(node_id).up = false; }
void StoreCluster::recover_node(const std::string& node_id) { node(node_id).up = true; }
bool StoreCluster::is_up(const std::string& node_id) const { return node(node_id).up; }

bool StoreCluster::verify_integrity(const ChunkHandle& handle) const {
  auto it = placement_.find(handle);
  if (it == placement_.end()) throw Error(ErrorCode::NotFound, handle.hex());
  for (const auto& id : it->second) {
    const Node& n = node(id);
    if (!n.up) continue;
    auto c = n.chunks.find(handle);
    if (c == n.chunks.end() || content_handle(c->second) != handle) return false;
  }
  return true;
}

std::size_t StoreCluster::repair(const ChunkHandle& handle) {
  Bytes good = get(handle);
  std::size_t rewritten = 0;
  for (const auto& id : placement(handle)) {
    Node& n = node(id);
    if (!n.up) continue;
    auto& slot = n.chunks[handle];
    if (slot != good) {
      slot = good;
      ++rewritten;
    }
  }
  return rewritten;
}

void StoreCluster::corrupt_replica(const ChunkHandle& handle, const std::string& node_id, Bytes bytes) {
  const auto& where = placement(handle);
  if (std::find(where.begin(), where.end(), node_id) == where.end()) {
    throw Error(ErrorCode::UnknownNode, node_id + " holds no replica of " + handle.hex());
  }
  node(node_id).chunks[handle] = std::move(bytes);
}

const std::vector<std::string>& StoreCluster::placement(const ChunkHandle& handle) const {
  auto it = placement_.find(handle);
  if (it == placement_.end()) throw Error(ErrorCode::NotFound, handle.hex());
  return it->second;
}

std::vector<ChunkHandle> StoreCluster::handles() const {
  std::vector<ChunkHandle> out;
  out.reserve(placement_.size());
  for (const auto& [h, ids] : placement_) out.push_back(h);
  return out;
}

std::size_t StoreCluster::stored_copies() const {
  std::size_t n = 0;
  for (const auto& [id, node] : nodes_) n += node.chunks.size();
  return n;
}

void StoreCluster::export_to(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  for (const auto& [handle, ids] : placement_) {
    Bytes bytes = get(handle);
    std::ofstream out(dir / handle.hex(), std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  }
}

Bytes read_chunk_file(const std::filesystem::path& dir, const ChunkHandle& handle) {
  std::ifstream in(dir / handle.hex(), std::ios::binary);
  if (!in) throw Error(ErrorCode::NotFound, "chunk file " + handle.hex());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

FsckReport fsck_directory(const std::filesystem::path& dir) {
  FsckReport report;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    ++report.chunks;
    std::string name = path.filename().string();
    try {
      ChunkHandle expected = ChunkHandle::from_hex(name);
      if (content_handle(read_chunk_file(dir, expected)) != expected) report.corrupt.push_back(name);
    } catch (const std::exception&) {
      report.corrupt.push_back(name);
    }
  }
  return report;
}

}  // namespace iotledger::store
