#include <cstdio>
#include <fstream>
#include <sstream>

#include "iotledger/chain/block_codec.hpp"
#include "iotledger/common/keys.hpp"
#include "iotledger/registry/events.hpp"
#include "iotledger/sim/simulation.hpp"

namespace iotledger::sim {

using nlohmann::json;

namespace {

std::string events_text(const RunResult& r) {
  std::string out;
  for (const auto& e : r.events) out += registry::log_action_to_line(e) + "\n";
  return out;
}

std::string chain_text(const RunResult& r) {
  std::string out;
  for (const auto& b : r.chain) out += chain::block_to_line(b) + "\n";
  return out;
}

std::string trace_text(const RunResult& r) {
  std::string out;
  for (const auto& line : r.trace) out += line + "\n";
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string fixed(double v, int places) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", places, v);
  return buf;
}

}  // namespace

json report_json(const RunResult& r) {
  const Metrics& m = r.metrics;
  json j;
  j["schema"] = 1;
  j["hash_function"] = std::string(hash_function_name());
  j["signature_scheme"] = std::string(signature_scheme_name());
  j["consensus"] = std::string(consensus_name(r.scenario.consensus));
  j["seed"] = r.scenario.seed;
  j["registry_mode"] = std::string(registry::registry_mode_name(r.mode));
  j["genesis_hash"] = chain::hash_header(r.genesis.header).hex();
  j["head_hash"] = r.chain.empty() ? j["genesis_hash"] : json(chain::hash_header(r.chain.back().header).hex());

  j["chain"] = {{"blocks", m.blocks},
                {"blocks_produced", m.blocks_produced},
                {"fork_count", m.fork_count},
                {"reorgs", m.reorgs},
                {"max_reorg_depth", m.max_reorg_depth},
                {"converged", m.converged},
                {"finality_violations", m.finality_violations},
                {"view_changes", m.view_changes},
                {"stalled_rounds", m.stalled_rounds}};

  j["throughput"] = {{"total_tx", m.total_tx},
                     {"tx_per_block", {{"mean", m.mean_tx_per_block}, {"min", m.min_tx_per_block}, {"max", m.max_tx_per_block}}},
                     {"simulated_duration_s", m.simulated_duration_s},
                     {"tps", m.tps},
                     {"mean_block_time_s", m.mean_block_time_s}};

  json model = {{"gas_limit", r.scenario.gas_limit},
                {"per_tx_gas", r.scenario.tx_gas},
                {"block_time_s", r.scenario.block_interval_s},
                {"tx_per_block", m.model.tx_per_block},
                {"tps", m.model.tps},
                {"tx_per_minute", m.model.tx_per_minute}};
  if (!m.model.rounding_note.empty()) model["note"] = m.model.rounding_note;
  j["throughput_model"] = model;

  j["pipeline"] = {{"frames_emitted", m.frames_emitted},
                   {"frames_lost", m.frames_lost},
                   {"frames_received", m.frames_received},
                   {"duplicate_frames", m.duplicate_frames},
                   {"chunks_stored", m.chunks_stored},
                   {"tx_submitted", m.tx_submitted},
                   {"synthetic_submitted", m.synthetic_submitted},
                   {"tx_refused", m.tx_refused},
                   {"proxy_buffered", m.proxy_buffered},
                   {"proxy_dropped", m.proxy_dropped},
                   {"proxy_retries", m.proxy_retries},
                   {"events_committed", m.events_committed},
                   {"uncommitted_tx", m.uncommitted_tx},
                   {"payload_mismatches", m.payload_mismatches},
                   {"conservation", m.conservation},
                   {"drain_timed_out", m.drain_timed_out}};

  j["latency_ms"] = {{"count", m.latency_count},
                     {"mean", m.latency_mean_ms},
                     {"p50", m.latency_p50_ms},
                     {"p95", m.latency_p95_ms},
                     {"max", m.latency_max_ms}};

  j["thin_clients"] = {{"clients", m.thin_clients},
                       {"checked", m.thin_checked},
                       {"confirmed", m.thin_confirmed},
                       {"headers_held", m.thin_headers},
                       {"transaction_bodies_held", m.thin_bodies},
                       {"synced", m.thin_synced}};

  j["registry"] = {{"device_count", m.device_count}, {"fingerprint", m.registry_fingerprint}};
  j["events_sha256"] = sha256(as_bytes(events_text(r))).hex();
  j["end_time_ms"] = m.end_time_ms;
  return j;
}

std::string report_text(const RunResult& r) {
  const Metrics& m = r.metrics;
  std::ostringstream o;
  auto row = [&](std::string_view label, const std::string& value) {
    o << "  " << label;
    for (std::size_t i = label.size(); i < 26; ++i) o << ' ';
    o << value << "\n";
  };
  o << "iotledger run report (hash " << hash_function_name() << ", signatures " << signature_scheme_name() << ")\n";
  row("consensus", std::string(consensus_name(r.scenario.consensus)));
  row("seed", std::to_string(r.scenario.seed));
  row("registry mode", std::string(registry::registry_mode_name(r.mode)));
  o << "chain\n";
  row("blocks", std::to_string(m.blocks));
  row("blocks produced", std::to_string(m.blocks_produced));
  row("fork count", std::to_string(m.fork_count));
  row("reorgs / max depth", std::to_string(m.reorgs) + " / " + std::to_string(m.max_reorg_depth));
  row("converged", m.converged ? "yes" : "no");
  row("finality violations", std::to_string(m.finality_violations));
  o << "throughput\n";
  row("committed tx", std::to_string(m.total_tx));
  row("tx per block", "mean " + fixed(m.mean_tx_per_block, 2) + "  min " + std::to_string(m.min_tx_per_block) +
                          "  max " + std::to_string(m.max_tx_per_block));
  row("simulated duration", std::to_string(m.simulated_duration_s) + " s");
  row("tps", fixed(m.tps, 3));
  row("mean block time", fixed(m.mean_block_time_s, 2) + " s");
  o << "throughput model\n";
  row("tx per block", std::to_string(m.model.tx_per_block));
  row("tps", fixed(m.model.tps, 1));
  row("tx per minute", fixed(m.model.tx_per_minute, 0));
  if (!m.model.rounding_note.empty()) row("note", m.model.rounding_note);
  o << "pipeline\n";
  row("frames emitted", std::to_string(m.frames_emitted));
  row("frames lost", std::to_string(m.frames_lost));
  row("frames received", std::to_string(m.frames_received));
  row("chunks stored", std::to_string(m.chunks_stored));
  row("tx submitted", std::to_string(m.tx_submitted) + " (+" + std::to_string(m.synthetic_submitted) + " load)");
  row("tx refused", std::to_string(m.tx_refused));
  row("events committed", std::to_string(m.events_committed));
  row("proxy buffered / dropped", std::to_string(m.proxy_buffered) + " / " + std::to_string(m.proxy_dropped));
  row("payload mismatches", std::to_string(m.payload_mismatches));
  row("conservation", m.conservation ? "holds" : "VIOLATED");
  row("emit->commit latency", "mean " + fixed(m.latency_mean_ms / 1000.0, 1) + " s  p95 " +
                                  fixed(static_cast<double>(m.latency_p95_ms) / 1000.0, 1) + " s");
  if (m.thin_clients > 0) {
    o << "thin clients\n";
    row("clients", std::to_string(m.thin_clients));
    row("confirmed", std::to_string(m.thin_confirmed) + " / " + std::to_string(m.thin_checked));
    row("bodies held", std::to_string(m.thin_bodies));
  }
  o << "registry\n";
  row("device count", std::to_string(m.device_count));
  row("fingerprint", m.registry_fingerprint);
  return o.str();
}

void write_run(const RunResult& r, const std::filesystem::path& dir, bool csv) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  json manifest = {{"schema", 1},
                   {"seed", r.scenario.seed},
                   {"consensus", std::string(consensus_name(r.scenario.consensus))},
                   {"registry_mode", std::string(registry::registry_mode_name(r.mode))},
                   {"hash_function", std::string(hash_function_name())},
                   {"signature_scheme", std::string(signature_scheme_name())}};
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  write_file(dir / "scenario.scn", r.scenario.canonical_text());
  write_file(dir / "genesis.json", chain::header_to_json(r.genesis.header).dump(2) + "\n");
  write_file(dir / "chain.jsonl", chain_text(r));
  write_file(dir / "events.jsonl", events_text(r));
  write_file(dir / "trace.jsonl", trace_text(r));
  write_file(dir / "report.json", report_json(r).dump(2) + "\n");
  write_file(dir / "report.txt", report_text(r));

  if (csv) {
    std::ostringstream o;
    o << "height,timestamp,interval_s,tx_count,gas_used,producer,hash\n";
    for (const auto& row : r.rows) {
      o << row.height << ',' << row.timestamp << ',' << row.interval_s << ',' << row.tx_count << ',' << row.gas_used
        << ',' << row.producer << ',' << row.hash << "\n";
    }
    write_file(dir / "blocks.csv", o.str());
  } else {
    fs::remove(dir / "blocks.csv");
  }

  fs::remove_all(dir / "chunks");
  r.store->export_to(dir / "chunks");
}

}  // namespace iotledger::sim
