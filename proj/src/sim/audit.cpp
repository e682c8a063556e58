#include "iotledger/sim/audit.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "iotledger/chain/block_codec.hpp"
#include "iotledger/common/error.hpp"
#include "iotledger/registry/events.hpp"
#include "iotledger/sim/setup.hpp"
#include "iotledger/sim/simulation.hpp"
#include "iotledger/store/store.hpp"

namespace iotledger::sim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::NotFound, "missing " + path.filename().string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::string text = read_file(path);
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string::npos) nl = text.size();
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

AuditResult failure(std::string file, std::optional<std::uint64_t> line, std::optional<std::uint64_t> height,
                    std::string message) {
  AuditResult r;
  r.ok = false;
  r.file = std::move(file);
  r.line = line;
  r.height = height;
  r.message = std::move(message);
  return r;
}

}  // namespace

AuditResult verify_run(const fs::path& dir) {
  Scenario scenario;
  registry::RegistryMode mode;
  try {
    json manifest = json::parse(read_file(dir / "manifest.json"));
    scenario = parse_scenario(read_file(dir / "scenario.scn"));
    if (manifest.at("seed").get<std::uint64_t>() != scenario.seed) {
      return failure("manifest.json", std::nullopt, std::nullopt, "seed disagrees with scenario.scn");
    }
    mode = registry::parse_registry_mode(manifest.at("registry_mode").get<std::string>());
  } catch (const std::exception& e) {
    return failure("manifest.json", std::nullopt, std::nullopt, std::string("cannot load run: ") + e.what());
  }

  ChainSetup setup = build_chain_setup(scenario);
  try {
    json g = json::parse(read_file(dir / "genesis.json"));
    chain::BlockHeader header = chain::header_from_json(g);
    if (header != setup.genesis.header || g.at("hash").get<std::string>() != chain::hash_header(header).hex()) {
      return failure("genesis.json", std::nullopt, 0, "genesis does not match the scenario");
    }
  } catch (const std::exception& e) {
    return failure("genesis.json", std::nullopt, 0, std::string("unreadable genesis: ") + e.what());
  }

  chain::ChainState state(setup.genesis, setup.params);
  registry::Registry registry(mode);
  std::vector<registry::LogAction> expected_events;
  std::vector<std::string> chain_lines;
  try {
    chain_lines = read_lines(dir / "chain.jsonl");
  } catch (const Error& e) {
    return failure("chain.jsonl", std::nullopt, std::nullopt, e.what());
  }
  for (std::uint64_t i = 0; i < chain_lines.size(); ++i) {
    const std::uint64_t height = i + 1;
    const std::uint64_t line = i + 1;
    auto fail_here = [&](const std::string& why) {
      return failure("chain.jsonl", line, height, "block " + std::to_string(height) + ": " + why);
    };
    chain::Block block;
    std::string stored_hash;
    try {
      json j = json::parse(chain_lines[i], nullptr, false);
      if (j.is_discarded() || !j.is_object()) return fail_here("line is not a JSON object");
      block = chain::block_from_json(j);
      if (!j.contains("hash") || !j["hash"].is_string()) return fail_here("missing hash");
      stored_hash = j["hash"].get<std::string>();
    } catch (const std::exception& e) {
      return fail_here(std::string("malformed: ") + e.what());
    }
    if (block.header.height != height) return fail_here("height field reads " + std::to_string(block.header.height));
    if (stored_hash != chain::hash_header(block.header).hex()) return fail_here("stored hash does not match header");
    chain::BlockStatus status;
    try {
      status = state.append_block(block, *setup.engine);
    } catch (const Error& e) {
      return fail_here(e.what());
    }
    if (status != chain::BlockStatus::Accepted) return fail_here(std::string(chain::block_status_name(status)));
    if (state.head().hash != chain::hash_header(block.header)) return fail_here("does not extend the canonical chain");
    for (auto& e : registry.apply_block(block)) expected_events.push_back(e);
  }

  std::vector<std::string> event_lines;
  try {
    event_lines = read_lines(dir / "events.jsonl");
  } catch (const Error& e) {
    return failure("events.jsonl", std::nullopt, std::nullopt, e.what());
  }
  std::vector<registry::LogAction> events;
  for (std::uint64_t i = 0; i < event_lines.size(); ++i) {
    try {
      events.push_back(registry::log_action_from_line(event_lines[i]));
    } catch (const std::exception& e) {
      return failure("events.jsonl", i + 1, std::nullopt, std::string("malformed event: ") + e.what());
    }
    if (i >= expected_events.size() || events.back() != expected_events[i]) {
      return failure("events.jsonl", i + 1, std::nullopt, "event differs from re-executed registry");
    }
  }
  if (events.size() != expected_events.size()) {
    return failure("events.jsonl", events.size() + 1, std::nullopt,
                   "event log ends early: " + std::to_string(events.size()) + " of " +
                       std::to_string(expected_events.size()));
  }
  try {
    if (registry::replay_events(events, mode).fingerprint() != registry.fingerprint()) {
      return failure("events.jsonl", std::nullopt, std::nullopt, "event replay does not reproduce registry state");
    }
  } catch (const Error& e) {
    return failure("events.jsonl", std::nullopt, std::nullopt, e.what());
  }

  std::set<ChunkHandle> handles;
  for (const auto& e : events) handles.insert(e.filehash);
  for (const auto& h : handles) {
    Bytes bytes;
    try {
      bytes = store::read_chunk_file(dir / "chunks", h);
    } catch (const Error&) {
      return failure("chunks/" + h.hex(), std::nullopt, std::nullopt, "missing chunk " + h.hex());
    }
    if (content_handle(bytes) != h) {
      return failure("chunks/" + h.hex(), std::nullopt, std::nullopt, "chunk " + h.hex() + " does not match its handle");
    }
  }
  auto fsck = store::fsck_directory(dir / "chunks");
  if (!fsck.corrupt.empty()) {
    return failure("chunks/" + fsck.corrupt.front(), std::nullopt, std::nullopt, "corrupt chunk file " + fsck.corrupt.front());
  }

  AuditResult ok;
  ok.ok = true;
  ok.blocks = chain_lines.size();
  ok.events = events.size();
  ok.chunks = handles.size();
  ok.message = "ok: " + std::to_string(ok.blocks) + " blocks, " + std::to_string(ok.events) + " events, " +
               std::to_string(ok.chunks) + " chunks";
  return ok;
}

ModeComparison compare_modes(const Scenario& scenario) {
  RunResult run = run_scenario(scenario);
  registry::Registry dedup(registry::RegistryMode::Deduplicated);
  registry::Registry faithful(registry::RegistryMode::FaithfulListing);
  ModeComparison c;
  for (const auto& block : run.chain) {
    c.writes += block.transactions.size();
    dedup.apply_block(block);
    faithful.apply_block(block);
  }
  c.distinct_devices = dedup.device_logs().size();
  c.deduplicated_count = dedup.get_device_count();
  c.faithful_count = faithful.get_device_count();
  c.deduplicated_invariants = dedup.invariants_hold();
  return c;
}

}  // namespace iotledger::sim
