#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "iotledger/chain/block.hpp"
#include "iotledger/registry/registry.hpp"
#include "iotledger/sim/scenario.hpp"
#include "iotledger/sim/throughput.hpp"
#include "iotledger/store/store.hpp"

namespace iotledger::sim {

struct RunOptions {
  std::optional<std::uint64_t> seed;  // overrides the scenario's seed
  registry::RegistryMode mode = registry::RegistryMode::Deduplicated;
};

struct BlockRow {
  std::uint64_t height = 0;
  std::uint64_t timestamp = 0;
  std::uint64_t interval_s = 0;
  std::uint64_t tx_count = 0;
  std::uint64_t gas_used = 0;
  std::string producer;
  std::string hash;
};

struct Metrics {
  // Chain shape, from the observer's final canonical chain.
  std::uint64_t blocks = 0;  // excluding genesis
  std::uint64_t blocks_produced = 0;
  std::uint64_t fork_count = 0;  // produced blocks left off the canonical chain
  std::uint64_t reorgs = 0;
  std::uint64_t max_reorg_depth = 0;  // deepest head switch on any node
  bool converged = true;              // every node ends on the same head
  std::uint64_t finality_violations = 0;
  std::uint64_t view_changes = 0;
  std::uint64_t stalled_rounds = 0;

  // Throughput.
  std::uint64_t total_tx = 0;
  std::uint64_t min_tx_per_block = 0;
  std::uint64_t max_tx_per_block = 0;
  double mean_tx_per_block = 0.0;
  std::uint64_t simulated_duration_s = 0;  // last block timestamp - genesis timestamp
  double tps = 0.0;
  double mean_block_time_s = 0.0;

  // Pipeline counters.
  std::uint64_t frames_emitted = 0;
  std::uint64_t frames_lost = 0;
  std::uint64_t frames_received = 0;
  std::uint64_t duplicate_frames = 0;
  std::uint64_t chunks_stored = 0;
  std::uint64_t tx_submitted = 0;  // device payloads that reached the mempool
  std::uint64_t synthetic_submitted = 0;
  std::uint64_t tx_refused = 0;
  std::uint64_t proxy_buffered = 0;  // still waiting at the end
  std::uint64_t proxy_dropped = 0;
  std::uint64_t proxy_retries = 0;
  std::uint64_t events_committed = 0;
  std::uint64_t uncommitted_tx = 0;
  std::uint64_t payload_mismatches = 0;
  bool conservation = false;
  bool drain_timed_out = false;

  // Emit -> commit latency.
  std::uint64_t latency_count = 0;
  double latency_mean_ms = 0.0;
  std::uint64_t latency_p50_ms = 0;
  std::uint64_t latency_p95_ms = 0;
  std::uint64_t latency_max_ms = 0;

  // Thin clients (gateways and devices).
  std::uint64_t thin_clients = 0;
  std::uint64_t thin_checked = 0;
  std::uint64_t thin_confirmed = 0;
  std::uint64_t thin_headers = 0;
  std::uint64_t thin_bodies = 0;
  bool thin_synced = true;

  std::uint64_t device_count = 0;  // registry get_device_count
  std::string registry_fingerprint;
  std::uint64_t end_time_ms = 0;
  ThroughputModel model;
};

struct RunResult {
  Scenario scenario;  // with the effective seed
  registry::RegistryMode mode = registry::RegistryMode::Deduplicated;
  chain::Block genesis;
  std::vector<chain::Block> chain;  // canonical blocks from height 1
  std::vector<registry::LogAction> events;
  std::vector<std::string> trace;  // one JSON object per line
  std::vector<BlockRow> rows;
  Metrics metrics;
  std::shared_ptr<store::StoreCluster> store;
};

/// Runs the scenario to completion. Throws Error(ConfigInvalid) for a
/// scenario the components reject.
RunResult run_scenario(const Scenario& scenario, const RunOptions& options = {});

nlohmann::json report_json(const RunResult& result);
std::string report_text(const RunResult& result);

/// Writes manifest.json, scenario.scn, genesis.json, chain.jsonl,
/// events.jsonl, trace.jsonl, report.json, report.txt, chunks/ and, with
/// `csv`, blocks.csv.
void write_run(const RunResult& result, const std::filesystem::path& dir, bool csv = false);

}  // namespace iotledger::sim
