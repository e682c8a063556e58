#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "iotledger/common/error.hpp"
#include "iotledger/sim/audit.hpp"
#include "iotledger/sim/simulation.hpp"
#include "iotledger/sim/throughput.hpp"
#include "iotledger/store/store.hpp"

namespace fs = std::filesystem;
using namespace iotledger;

namespace {

constexpr int kOk = 0;
constexpr int kAuditFailure = 1;
constexpr int kConfigError = 2;

fs::path default_out_dir(const fs::path& scenario) {
  const char* env = std::getenv("IOTLEDGER_OUT_DIR");
  fs::path base = env != nullptr && *env != '\0' ? fs::path(env) : fs::path("runs");
  return base / scenario.stem();
}

int cmd_run(const std::string& scenario_path, std::optional<std::uint64_t> seed, std::string out, bool csv,
            bool faithful) {
  sim::Scenario scenario = sim::load_scenario(scenario_path);
  sim::RunOptions options;
  options.seed = seed;
  options.mode = faithful ? registry::RegistryMode::FaithfulListing : registry::RegistryMode::Deduplicated;
  sim::RunResult result = sim::run_scenario(scenario, options);
  fs::path dir = out.empty() ? default_out_dir(scenario_path) : fs::path(out);
  sim::write_run(result, dir, csv);

  fmt::print("{}", sim::report_text(result));
  fmt::print("artifacts: {}\n", dir.string());

  const auto& m = result.metrics;
  bool ok = m.conservation && m.finality_violations == 0 && m.converged && !m.drain_timed_out;
  if (!ok) fmt::print(stderr, "run finished with an invariant violation\n");
  return ok ? kOk : kAuditFailure;
}

int cmd_throughput(std::uint64_t gas_limit, std::uint64_t tx_gas, double block_time, bool as_json) {
  sim::ThroughputModel m = sim::throughput_model(gas_limit, tx_gas, block_time);
  if (as_json) {
    nlohmann::json j = {{"gas_limit", gas_limit},     {"per_tx_gas", tx_gas},   {"block_time_s", block_time},
                        {"tx_per_block", m.tx_per_block}, {"tps", m.tps}, {"tx_per_minute", m.tx_per_minute}};
    if (!m.rounding_note.empty()) j["note"] = m.rounding_note;
    fmt::print("{}\n", j.dump(2));
    return kOk;
  }
  fmt::print("gas limit        {}\n", gas_limit);
  fmt::print("per-tx gas       {}\n", tx_gas);
  fmt::print("block time       {} s\n", block_time);
  fmt::print("tx per block     {}\n", m.tx_per_block);
  fmt::print("tps              {:.1f}\n", m.tps);
  fmt::print("tx per minute    {:.0f}\n", m.tx_per_minute);
  if (!m.rounding_note.empty()) fmt::print("note             {}\n", m.rounding_note);
  return kOk;
}

int cmd_verify(const std::string& dir) {
  sim::AuditResult r = sim::verify_run(dir);
  if (r.ok) {
    fmt::print("PASS {}\n", r.message);
    return kOk;
  }
  std::string where = r.file;
  if (r.line) where += fmt::format(":{}", *r.line);
  if (r.height) where += fmt::format(" (height {})", *r.height);
  fmt::print("FAIL {}: {}\n", where, r.message);
  return kAuditFailure;
}

int cmd_compare(const std::string& scenario_path) {
  sim::Scenario scenario = sim::load_scenario(scenario_path);
  sim::ModeComparison c = sim::compare_modes(scenario);
  fmt::print("committed writes     {}\n", c.writes);
  fmt::print("distinct devices     {}\n", c.distinct_devices);
  fmt::print("{:<20} {:>14} {:>18}\n", "", "deduplicated", "faithful-listing");
  fmt::print("{:<20} {:>14} {:>18}\n", "device_index length", c.deduplicated_count, c.faithful_count);
  if (c.deduplicated_count != c.faithful_count) {
    fmt::print("modes diverge: faithful listing pushes the device id on every write\n");
  } else {
    fmt::print("modes agree\n");
  }
  return c.deduplicated_invariants ? kOk : kAuditFailure;
}

int cmd_fsck(const std::string& dir) {
  store::FsckReport r = store::fsck_directory(dir);
  for (const auto& name : r.corrupt) fmt::print("corrupt {}\n", name);
  fmt::print("{} chunks, {} corrupt\n", r.chunks, r.corrupt.size());
  return r.corrupt.empty() ? kOk : kAuditFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blockchain-backed IoT data pipeline simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a scenario and write its artifacts");
  std::string run_scenario;
  std::optional<std::uint64_t> run_seed;
  std::string run_out;
  bool run_csv = false;
  bool run_faithful = false;
  run->add_option("scenario", run_scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", run_seed, "Override the scenario seed");
  run->add_option("--out", run_out, "Output directory (default $IOTLEDGER_OUT_DIR/<scenario> or runs/<scenario>)");
  run->add_flag("--csv", run_csv, "Also write per-block rows to blocks.csv");
  run->add_flag("--faithful-listing", run_faithful, "Register the device id on every write, as the original listing does");

  auto* tp = app.add_subcommand("throughput", "Closed-form throughput from gas limit, per-tx gas and block time");
  std::uint64_t gas_limit = 0;
  std::uint64_t tx_gas = 0;
  double block_time = 0;
  bool tp_json = false;
  tp->add_option("--gas-limit", gas_limit, "Block gas limit")->required()->check(CLI::PositiveNumber);
  tp->add_option("--tx-gas", tx_gas, "Gas per transaction")->required()->check(CLI::PositiveNumber);
  tp->add_option("--block-time", block_time, "Block time in seconds")->required()->check(CLI::PositiveNumber);
  tp->add_flag("--json", tp_json, "Print JSON");

  auto* verify = app.add_subcommand("verify", "Audit a run directory");
  std::string verify_dir;
  verify->add_option("run-dir", verify_dir, "Directory written by 'run'")->required()->check(CLI::ExistingDirectory);

  auto* compare = app.add_subcommand("compare-modes", "Registry device_index under both listing modes");
  std::string compare_scenario;
  compare->add_option("scenario", compare_scenario, "Scenario file")->required()->check(CLI::ExistingFile);

  auto* fsck = app.add_subcommand("fsck", "Check every chunk file against its content address");
  std::string fsck_dir;
  fsck->add_option("chunk-dir", fsck_dir, "Chunk directory")->required()->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*run) return cmd_run(run_scenario, run_seed, run_out, run_csv, run_faithful);
    if (*tp) return cmd_throughput(gas_limit, tx_gas, block_time, tp_json);
    if (*verify) return cmd_verify(verify_dir);
    if (*compare) return cmd_compare(compare_scenario);
    if (*fsck) return cmd_fsck(fsck_dir);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigInvalid || e.code() == ErrorCode::InvalidGasSchedule ||
        e.code() == ErrorCode::InvalidPbftConfig || e.code() == ErrorCode::ZeroTotalStake) {
      fmt::print(stderr, "config error: {}\n", e.what());
      return kConfigError;
    }
    fmt::print(stderr, "error: {}\n", e.what());
    return kAuditFailure;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kAuditFailure;
  }
  return kOk;
}
