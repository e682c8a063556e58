#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "iotledger/chain/block_codec.hpp"
#include "iotledger/common/error.hpp"
#include "iotledger/registry/events.hpp"
#include "iotledger/sim/audit.hpp"
#include "iotledger/sim/scheduler.hpp"
#include "iotledger/sim/setup.hpp"
#include "iotledger/sim/simulation.hpp"
#include "iotledger/sim/throughput.hpp"

using namespace iotledger;
using namespace iotledger::sim;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = IOTLEDGER_SCENARIO_DIR;
const fs::path kGolden = IOTLEDGER_GOLDEN_DIR;

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE_MESSAGE(in, "cannot open " << p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<fs::path> shipped_scenarios() {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(kScenarios)) {
    if (e.path().extension() == ".scn") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string config_error(std::string_view text) {
  try {
    parse_scenario(text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigInvalid);
    return e.what();
  }
  FAIL("scenario was accepted: " << text);
  return {};
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("iotledger-sim-" + name);
  fs::remove_all(dir);
  return dir;
}

constexpr std::string_view kSmallPow = R"(schema = 1
seed = 5

[chain]
consensus = pow
confirmations = 2

[pow]
miners = 2
hashrate = 32

[devices.s]
count = 10
emit_period_s = 20
frames = 6

[run]
duration_s = 600
max_blocks = 10
)";

}  // namespace

TEST_CASE("scheduler orders by time, then by scheduling order") {
  Scheduler s;
  std::vector<int> order;
  s.at(10, [&] { order.push_back(2); });
  s.at(5, [&] { order.push_back(1); });
  s.at(10, [&] { order.push_back(3); });
  s.at(10, [&] { s.after(0, [&] { order.push_back(4); }); });
  while (!s.empty()) s.step();
  CHECK(order == std::vector<int>{1, 2, 3, 4});
  CHECK(s.now() == 10);
  CHECK(s.executed() == 5);

  Scheduler d;
  d.at(100, [&] { order.push_back(9); });
  d.at(7, [&] { order.push_back(8); }, true);
  while (!d.empty()) d.step(true);
  CHECK(order.back() == 8);
  CHECK(d.now() == 7);
}

TEST_CASE("throughput model") {
  auto a = throughput_model(4'712'388, 21'000, 14);
  CHECK(a.tx_per_block == 224);
  CHECK(a.tps == doctest::Approx(16.0));
  CHECK(a.tx_per_minute == doctest::Approx(960.0));

  auto b = throughput_model(6'718'904, 21'000, 30);
  CHECK(b.tx_per_block == 319);
  CHECK(b.tps == doctest::Approx(319.0 / 30.0));
  CHECK(b.tx_per_minute == doctest::Approx(638.0));
  CHECK(b.rounding_note.find("320") != std::string::npos);
  CHECK(b.rounding_note.find("319") != std::string::npos);

  auto unit = throughput_model(21'000, 21'000, 1);
  CHECK(unit.tx_per_block == 1);
  CHECK(unit.tps == 1.0);
  CHECK(unit.tx_per_minute == 60.0);
  CHECK(unit.rounding_note.empty());
  CHECK_THROWS_AS(throughput_model(0, 21'000, 1), std::invalid_argument);
  CHECK_THROWS_AS(throughput_model(1, 21'000, 0), std::invalid_argument);
}

TEST_CASE("shipped scenarios parse and round-trip through canonical text") {
  auto files = shipped_scenarios();
  CHECK(files.size() >= 10);
  for (const auto& f : files) {
    Scenario s = load_scenario(f);
    Scenario again = parse_scenario(s.canonical_text());
    CHECK_MESSAGE(again == s, f);
    CHECK(again.canonical_text() == s.canonical_text());
    CHECK(load_scenario(f).config_digest() == s.config_digest());
  }
}

TEST_CASE("scenario diagnostics name the line and key") {
  CHECK(config_error("seed = 1\n").find("schema") != std::string::npos);
  CHECK(config_error("schema = 2\n").find("schema") != std::string::npos);
  CHECK(config_error("schema = 1\n[chain]\ngas_limt = 5\n").find("line 3: 'gas_limt'") != std::string::npos);
  CHECK(config_error("schema = 1\n[chain]\nconsensus = raft\n").find("line 3") != std::string::npos);
  CHECK(config_error("schema = 1\n[chain]\ntx_gas = 1\ntx_gas = 2\n").find("line 4") != std::string::npos);
  CHECK(config_error("schema = 1\n[bogus]\n").find("line 2") != std::string::npos);
  CHECK(config_error("schema = 1\n[run]\n[run]\n").find("line 3") != std::string::npos);
  CHECK(config_error("schema = 1\n[chain]\ngas_limit = -4\n").find("gas_limit") != std::string::npos);
  CHECK(config_error("schema = 1\n[gateways]\nloss_probability = 1.5\n").find("loss_probability") !=
        std::string::npos);
  CHECK(config_error("schema = 1\n[devices.x]\npayload_len = 256\n").find("payload_len") != std::string::npos);
  CHECK(config_error("schema = 1\n[devices.x]\npower = battery\nmode = thin-client\n").find("thin-client") !=
        std::string::npos);
  CHECK(config_error("schema = 1\n[chain]\ngas_limit = 100\ntx_gas = 200\n").find("tx_gas") != std::string::npos);
  CHECK(config_error("schema = 1\n[chain]\nconsensus = pos\n[pos]\nstakes = 0, 0\n").find("stakes") !=
        std::string::npos);
  CHECK(config_error("schema = 1\n[chain]\nconsensus = pbft\n[pbft]\nvalidators = 3\nf = 1\n").find("pbft.f") !=
        std::string::npos);
  CHECK(config_error("schema = 1\n[chain]\nconsensus = pbft\n[pbft]\noffline = 4\n").find("offline") !=
        std::string::npos);
  CHECK(config_error("schema = 1\n[store]\nnodes = 2\n").find("replication") != std::string::npos);
  CHECK(config_error("schema = 1\nseed = 1 2\n").find("seed") != std::string::npos);
}

TEST_CASE("scenario values: separators, decimals and lists") {
  Scenario s = parse_scenario(
      "schema = 1\nseed = 1_000\n[chain]\ngas_limit = 6_718_904\n[devices.d]\nemit_period_s = 0.0015\n"
      "[gateways]\ncount = 2\nroles = full-node, thin-client\n");
  CHECK(s.seed == 1000);
  CHECK(s.gas_limit == 6'718'904);
  CHECK(s.devices.at(0).emit_period_ms == 2);
  CHECK(s.gateway_role(1) == lpwan::GatewayRole::ThinClient);
  CHECK(s.gateway_role(2) == lpwan::GatewayRole::FullNode);
  CHECK(parse_scenario("schema = 1 # comment\n\n# only a comment\n") == parse_scenario("schema = 1\n"));
}

TEST_CASE("golden genesis files match the rebuilt genesis") {
  for (const auto& f : shipped_scenarios()) {
    const std::string stem = f.stem().string();
    Scenario s = load_scenario(f);
    chain::Block g = make_genesis(s);
    std::string golden = read_text(kGolden / (stem + ".genesis.json"));
    CHECK_MESSAGE(chain::header_to_json(g.header).dump(2) + "\n" == golden, stem);
    auto j = nlohmann::json::parse(golden);
    CHECK(j.at("hash").get<std::string>() == chain::hash_header(g.header).hex());
    CHECK(chain::header_from_json(j) == g.header);
  }
  Scenario a = load_scenario(kScenarios / "tamper-20.scn");
  Scenario b = a;
  b.seed += 1;
  CHECK(chain::hash_header(make_genesis(a).header) != chain::hash_header(make_genesis(b).header));
}

TEST_CASE("golden block file replays to the golden event log") {
  Scenario s = load_scenario(kScenarios / "one-device-three-writes.scn");
  ChainSetup setup = build_chain_setup(s);
  chain::ChainState state(setup.genesis, setup.params);
  registry::Registry reg;
  std::vector<registry::LogAction> events;
  std::istringstream chain_lines(read_text(kGolden / "one-device-three-writes.chain.jsonl"));
  for (std::string line; std::getline(chain_lines, line);) {
    chain::Block b = chain::block_from_line(line);
    REQUIRE(state.append_block(b, *setup.engine) == chain::BlockStatus::Accepted);
    for (const auto& e : reg.apply_block(b)) events.push_back(e);
  }
  std::string log;
  for (const auto& e : events) log += registry::log_action_to_line(e) + "\n";
  CHECK(log == read_text(kGolden / "one-device-three-writes.events.jsonl"));
  CHECK(events.size() == 3);
  CHECK(reg.get_device_count() == 1);

  RunResult run = run_scenario(s);
  std::string chain_text;
  for (const auto& b : run.chain) chain_text += chain::block_to_line(b) + "\n";
  CHECK(chain_text == read_text(kGolden / "one-device-three-writes.chain.jsonl"));
}

TEST_CASE("a small PoW run satisfies the pipeline invariants") {
  Scenario s = parse_scenario(kSmallPow);
  RunResult r = run_scenario(s);
  const Metrics& m = r.metrics;
  CHECK(m.blocks >= 10);
  CHECK(m.conservation);
  CHECK(m.converged);
  CHECK(m.finality_violations == 0);
  CHECK_FALSE(m.drain_timed_out);
  CHECK(m.frames_emitted == m.frames_received);
  CHECK(m.frames_received == m.chunks_stored);
  CHECK(m.chunks_stored == m.events_committed);
  CHECK(m.payload_mismatches == 0);
  CHECK(m.fork_count == m.blocks_produced - m.blocks);

  std::uint64_t total = 0;
  for (const auto& b : r.chain) {
    total += b.transactions.size();
    CHECK(b.transactions.size() <= 224);
  }
  CHECK(total == m.total_tx);
  CHECK(m.tps * static_cast<double>(m.simulated_duration_s) == doctest::Approx(static_cast<double>(total)));
  for (std::size_t i = 1; i < r.chain.size(); ++i) {
    CHECK(r.chain[i].header.parent_hash == chain::hash_header(r.chain[i - 1].header));
  }
}

TEST_CASE("runs are deterministic in the seed") {
  Scenario s = parse_scenario(kSmallPow);
  RunResult a = run_scenario(s), b = run_scenario(s);
  CHECK(report_json(a).dump() == report_json(b).dump());
  CHECK(a.events == b.events);
  CHECK(a.trace == b.trace);
  RunResult c = run_scenario(s, RunOptions{s.seed + 1});
  CHECK(report_json(c).dump() != report_json(a).dump());
  CHECK(c.scenario.seed == s.seed + 1);
}

TEST_CASE("PBFT runs never fork") {
  Scenario s = load_scenario(kScenarios / "private-pbft.scn");
  s.duration_s = 200;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    RunResult r = run_scenario(s, RunOptions{seed});
    CHECK(r.metrics.fork_count == 0);
    CHECK(r.metrics.reorgs == 0);
    CHECK(r.metrics.blocks == r.metrics.blocks_produced);
    CHECK(r.metrics.conservation);
  }
}

TEST_CASE("verify passes clean artifacts and pinpoints tampering") {
  Scenario s = load_scenario(kScenarios / "tamper-20.scn");
  RunResult r = run_scenario(s);
  auto dir = scratch("verify");
  write_run(r, dir);
  AuditResult ok = verify_run(dir);
  REQUIRE_MESSAGE(ok.ok, ok.message);
  CHECK(ok.blocks == 20);

  std::string pristine = read_text(dir / "chain.jsonl");
  auto rewrite = [&](const std::string& text) {
    std::ofstream out(dir / "chain.jsonl", std::ios::binary | std::ios::trunc);
    out << text;
  };

  // Flip one bit in the sixth line's text.
  std::size_t line_start = 0;
  for (int i = 0; i < 5; ++i) line_start = pristine.find('\n', line_start) + 1;
  std::string flipped = pristine;
  std::size_t pos = flipped.find("\"transactions\"", line_start) + 20;
  flipped[pos] = static_cast<char>(flipped[pos] ^ 0x01);
  rewrite(flipped);
  AuditResult bad = verify_run(dir);
  CHECK_FALSE(bad.ok);
  CHECK(bad.file == "chain.jsonl");
  CHECK(bad.height == 6);
  CHECK(bad.line == 6);
  rewrite(pristine);

  // Truncating the chain leaves the event log unexplained.
  rewrite(pristine.substr(0, line_start));
  AuditResult short_chain = verify_run(dir);
  CHECK_FALSE(short_chain.ok);
  CHECK(short_chain.file == "events.jsonl");
  rewrite(pristine);

  // A deleted chunk is reported by handle.
  REQUIRE_FALSE(r.events.empty());
  ChunkHandle victim = r.events[7].filehash;
  fs::remove(dir / "chunks" / victim.hex());
  AuditResult missing = verify_run(dir);
  CHECK_FALSE(missing.ok);
  CHECK(missing.message.find(victim.hex()) != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("artifacts are written as documented") {
  Scenario s = load_scenario(kScenarios / "one-device-three-writes.scn");
  RunResult r = run_scenario(s);
  auto dir = scratch("artifacts");
  write_run(r, dir, true);
  for (const char* name : {"manifest.json", "scenario.scn", "genesis.json", "chain.jsonl", "events.jsonl",
                           "trace.jsonl", "report.json", "report.txt", "blocks.csv"}) {
    CHECK_MESSAGE(fs::exists(dir / name), name);
  }
  CHECK(parse_scenario(read_text(dir / "scenario.scn")) == r.scenario);
  auto report = nlohmann::json::parse(read_text(dir / "report.json"));
  CHECK(report.at("hash_function") == "sha256");
  CHECK(report.at("chain").at("blocks") == r.chain.size());
  CHECK(read_text(dir / "report.txt").rfind("iotledger run report (hash sha256", 0) == 0);
  std::istringstream trace(read_text(dir / "trace.jsonl"));
  std::size_t lines = 0;
  for (std::string line; std::getline(trace, line); ++lines) CHECK(nlohmann::json::parse(line).contains("stage"));
  CHECK(lines > 0);
  write_run(r, dir, false);
  CHECK_FALSE(fs::exists(dir / "blocks.csv"));
  fs::remove_all(dir);
}

TEST_CASE("compare_modes") {
  auto one = compare_modes(load_scenario(kScenarios / "one-device-three-writes.scn"));
  CHECK(one.writes == 3);
  CHECK(one.deduplicated_count == 1);
  CHECK(one.faithful_count == 3);

  Scenario distinct = parse_scenario("schema = 1\n[chain]\nconsensus = pos\n[devices.d]\ncount = 4\nframes = 1\n"
                                     "[run]\nduration_s = 60\n");
  auto d = compare_modes(distinct);
  CHECK(d.writes == 4);
  CHECK(d.deduplicated_count == d.faithful_count);

  Scenario empty = parse_scenario("schema = 1\n[chain]\nconsensus = pos\n[run]\nduration_s = 60\n");
  auto e = compare_modes(empty);
  CHECK(e.deduplicated_count == 0);
  CHECK(e.faithful_count == 0);
}
