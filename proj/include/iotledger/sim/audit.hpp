#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "iotledger/sim/scenario.hpp"

namespace iotledger::sim {

struct AuditResult {
  bool ok = false;
  std::string message;  // first violation, or a summary on success
  std::optional<std::uint64_t> height;  // block at fault, when the chain is to blame
  std::optional<std::uint64_t> line;    // 1-based line in the offending file
  std::string file;

  std::uint64_t blocks = 0;
  std::uint64_t events = 0;
  std::uint64_t chunks = 0;
};

/// Re-audits the artifacts of a run directory: rebuilds genesis and the seal
/// verifier from scenario.scn and the manifest seed, re-validates every block
/// of chain.jsonl in order, re-executes the registry and compares the result
/// with events.jsonl, replays the event log into a fresh registry, and checks
/// that every referenced chunk exists under chunks/ and matches its handle.
/// Stops at the first violation.
AuditResult verify_run(const std::filesystem::path& run_dir);

struct ModeComparison {
  std::uint64_t writes = 0;  // committed set_device_data calls
  std::uint64_t distinct_devices = 0;
  std::uint64_t deduplicated_count = 0;  // device_index length
  std::uint64_t faithful_count = 0;
  bool deduplicated_invariants = false;
};

/// Runs the scenario once and replays its committed transactions through the
/// registry in both modes.
ModeComparison compare_modes(const Scenario& scenario);

}  // namespace iotledger::sim
