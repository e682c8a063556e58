#include "iotledger/sim/simulation.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

#include "iotledger/chain/merkle.hpp"
#include "iotledger/common/error.hpp"
#include "iotledger/common/rng.hpp"
#include "iotledger/lpwan/clients.hpp"
#include "iotledger/lpwan/gateway.hpp"
#include "iotledger/registry/events.hpp"
#include "iotledger/registry/gas.hpp"
#include "iotledger/sim/scheduler.hpp"
#include "iotledger/sim/setup.hpp"

namespace iotledger::sim {

namespace {

using nlohmann::json;

constexpr std::size_t kNoDevice = static_cast<std::size_t>(-1);
constexpr std::uint64_t kTickMs = 1000;
constexpr std::uint64_t kSyntheticDevices = 64;

struct Node {
  std::string name;
  chain::ChainState chain;
};

struct TxRecord {
  std::uint64_t emitted_ms = 0;
  Bytes payload;
  std::size_t gateway = 0;
  std::size_t device = kNoDevice;
  bool committed = false;
};

struct Pending {
  std::uint64_t emitted_ms = 0;
  Bytes payload;
  std::size_t device = kNoDevice;
};

class Simulation {
 public:
  Simulation(const Scenario& scenario, registry::RegistryMode mode)
      : s_(scenario),
        mode_(mode),
        setup_(build_chain_setup(scenario)),
        gas_{scenario.tx_gas, scenario.gas_limit},
        store_(std::make_shared<store::StoreCluster>(scenario.store_nodes, scenario.replication)),
        registry_(mode),
        loss_rng_(digest_prefix_u64(derive_seed(scenario.seed, "loss"))),
        nonce_rng_(digest_prefix_u64(derive_seed(scenario.seed, "pow-nonce"))) {
    gas_.validate();
    build_nodes();
    build_gateways();
    build_devices();
    bus_.subscribe(std::nullopt, [this](const registry::LogAction& e) { events_.push_back(e); });
  }

  RunResult run() {
    schedule_all();
    while (!sched_.empty() && !stopped_) sched_.step();
    // Let in-flight blocks land so every node sees every produced block.
    while (!sched_.empty()) sched_.step(/*deliveries_only=*/true);
    finalize();
    return std::move(result_);
  }

 private:
  // --- setup -----------------------------------------------------------------

  void build_nodes() {
    const char* role = s_.consensus == ConsensusKind::Pow ? "miner-" : "validator-";
    for (std::size_t i = 0; i < setup_.producers.size(); ++i) {
      nodes_.push_back(std::make_unique<Node>(Node{role + std::to_string(i), {setup_.genesis, setup_.params}}));
    }
    observer_ = 0;
    bool observer_set = false;
    for (std::uint64_t g = 0; g < s_.gateways; ++g) {
      if (s_.gateway_role(g) != lpwan::GatewayRole::FullNode) {
        gateway_node_.push_back(kNoDevice);
        continue;
      }
      gateway_node_.push_back(nodes_.size());
      if (!observer_set) {
        observer_ = nodes_.size();
        observer_set = true;
      }
      nodes_.push_back(std::make_unique<Node>(Node{"gateway-" + std::to_string(g), {setup_.genesis, setup_.params}}));
    }
  }

  void build_gateways() {
    for (std::uint64_t g = 0; g < s_.gateways; ++g) {
      lpwan::SmartProxy proxy(KeyPair::from_seed(derive_seed(s_.seed, "proxy", g)), s_.tx_gas, s_.proxy_buffer);
      gateways_.emplace_back("gateway-" + std::to_string(g), s_.gateway_role(g), std::move(proxy));
    }
    if (s_.saturate) {
      synthetic_ = gateways_.size();
      lpwan::SmartProxy proxy(KeyPair::from_seed(derive_seed(s_.seed, "proxy-load")), s_.tx_gas, s_.proxy_buffer);
      gateways_.emplace_back("load-generator", lpwan::GatewayRole::FullNode, std::move(proxy));
      for (std::uint64_t i = 0; i < kSyntheticDevices; ++i) {
        synthetic_devices_.push_back(KeyPair::from_seed(derive_seed(s_.seed, "synthetic-device", i)).address());
      }
    }
    pending_.resize(gateways_.size());
  }

  void build_devices() {
    std::uint64_t k = 0;
    for (const auto& cls : s_.devices) {
      for (std::uint64_t j = 0; j < cls.count; ++j, ++k) {
        lpwan::DeviceConfig config;
        config.power = cls.power;
        config.mode = cls.mode;
        config.tech = cls.tech;
        config.emit_period_ms = cls.emit_period_ms;
        config.payload_len = cls.payload_len;
        config.first_emit_ms = j * cls.stagger_ms;
        config.max_frames = cls.frames;
        try {
          devices_.emplace_back(KeyPair::from_seed(derive_seed(s_.seed, "device", k)), config, s_.seed);
        } catch (const Error& e) {
          throw Error(ErrorCode::ConfigInvalid, "devices." + cls.name + ": " + e.what());
        }
        devices_.back().set_refuse_signing(cls.refuse_signing);
        device_gateway_.push_back(k % s_.gateways);
        device_index_.emplace(devices_.back().id(), devices_.size() - 1);
      }
    }
  }

  void schedule_all() {
    const std::uint64_t duration_ms = s_.duration_s * 1000;
    for (std::size_t i = 0; i < devices_.size(); ++i) schedule_device(i);

    sched_.at(duration_ms, [this] {
      emitting_ = false;
      trace("emission-end", json::object());
      check_drained();
    });
    sched_.at(duration_ms + s_.drain_limit_s * 1000, [this] {
      if (stopped_) return;
      metrics_.drain_timed_out = true;
      stopped_ = true;
    });

    if (s_.outage_nodes > 0) {
      sched_.at(s_.outage_start_s * 1000, [this] {
        for (std::uint64_t i = 0; i < s_.outage_nodes; ++i) store_->fail_node(store_->node_ids()[i]);
        trace("store-outage", {{"nodes", s_.outage_nodes}});
      });
      sched_.at(s_.outage_end_s * 1000, [this] {
        for (std::uint64_t i = 0; i < s_.outage_nodes; ++i) store_->recover_node(store_->node_ids()[i]);
        trace("store-recover", {{"nodes", s_.outage_nodes}});
      });
    }

    switch (s_.consensus) {
      case ConsensusKind::Pow:
        for (std::size_t m = 0; m < setup_.producers.size(); ++m) sched_.at(kTickMs, [this, m] { pow_tick(m); });
        break;
      case ConsensusKind::Pos:
        sched_.at(s_.block_interval_s * 1000, [this] { pos_slot(1); });
        break;
      case ConsensusKind::Pbft:
        sched_.at(s_.block_interval_s * 1000, [this] { pbft_round(1, 0); });
        break;
    }
  }

  // --- tracing ---------------------------------------------------------------

  void trace(std::string_view stage, json fields) {
    fields["t_ms"] = sched_.now();
    fields["stage"] = stage;
    result_.trace.push_back(fields.dump());
  }

  // --- device pipeline -------------------------------------------------------

  void schedule_device(std::size_t i) {
    const auto& d = devices_[i];
    if (d.exhausted() || d.next_emit_ms() >= s_.duration_s * 1000) return;
    sched_.at(d.next_emit_ms(), [this, i] { on_emit(i); });
  }

  void on_emit(std::size_t i) {
    if (!emitting_) return;
    auto frame = devices_[i].tick(sched_.now());
    if (!frame) return;
    ++metrics_.frames_emitted;
    std::size_t g = device_gateway_[i];
    trace("emit", {{"device", frame->device_id.hex()}, {"seq", frame->sequence}, {"airtime_ms", frame->airtime_ms}});
    if (loss_rng_.bernoulli(s_.loss_probability)) {
      ++metrics_.frames_lost;
      trace("lost", {{"device", frame->device_id.hex()}, {"seq", frame->sequence}});
    } else {
      auto reception = gateways_[g].schedule_reception(*frame);
      ++inflight_frames_;
      sched_.at(reception.end_ms, [this, g, i, f = std::move(*frame)] { on_receive(g, i, f); });
    }
    schedule_device(i);
  }

  const lpwan::EndDevice* signer_for(const Address& id) const {
    auto it = device_index_.find(id);
    if (it == device_index_.end()) return nullptr;
    const auto& d = devices_[it->second];
    return d.config().mode == lpwan::ClientMode::PlainSensor ? nullptr : &d;
  }

  void on_receive(std::size_t g, std::size_t device, const lpwan::UplinkFrame& frame) {
    --inflight_frames_;
    ++metrics_.frames_received;
    auto& gw = gateways_[g];
    trace("receive", {{"gateway", gw.name()}, {"device", frame.device_id.hex()}, {"seq", frame.sequence}});
    auto signers = [this](const Address& id) { return signer_for(id); };
    std::uint64_t dropped_before = gw.proxy().dropped();
    auto outcome = gw.receive(frame, *store_, mempool_, sched_.now(), signers);
    handle_ingest(g, outcome, Pending{frame.emitted_at_ms, frame.payload, device}, dropped_before);
    check_drained();
  }

  void handle_ingest(std::size_t g, const lpwan::IngestOutcome& outcome, Pending item, std::uint64_t dropped_before) {
    auto& proxy = gateways_[g].proxy();
    if (outcome.kind != lpwan::IngestOutcome::Kind::Buffered) {
      record_outcome(g, outcome, std::move(item));
      return;
    }
    if (proxy.dropped() > dropped_before) {
      trace("drop", {{"gateway", gateways_[g].name()}});
      pending_[g].pop_front();
    }
    trace("buffer", {{"gateway", gateways_[g].name()}, {"device", outcome.device_id.hex()}});
    pending_[g].push_back(std::move(item));
    schedule_retry();
  }

  void record_outcome(std::size_t g, const lpwan::IngestOutcome& outcome, Pending item) {
    const std::string& gw = gateways_[g].name();
    trace("store", {{"gateway", gw}, {"device", outcome.device_id.hex()}, {"handle", outcome.handle->hex()}});
    if (outcome.kind == lpwan::IngestOutcome::Kind::Refused) {
      ++metrics_.tx_refused;
      trace("refused", {{"gateway", gw}, {"device", outcome.device_id.hex()}});
      return;
    }
    trace("enqueue", {{"gateway", gw}, {"tx", outcome.tx_id->hex()}});
    if (g == synthetic_) {
      ++metrics_.synthetic_submitted;
    } else {
      ++metrics_.tx_submitted;
    }
    txs_.emplace(*outcome.tx_id, TxRecord{item.emitted_ms, std::move(item.payload), g, item.device, false});
  }

  void schedule_retry() {
    if (retry_scheduled_) return;
    retry_scheduled_ = true;
    sched_.after(kTickMs, [this] { on_retry(); });
  }

  void on_retry() {
    retry_scheduled_ = false;
    auto signers = [this](const Address& id) { return signer_for(id); };
    bool waiting = false;
    for (std::size_t g = 0; g < gateways_.size(); ++g) {
      if (pending_[g].empty()) continue;
      auto done = gateways_[g].proxy().retry(*store_, mempool_, signers);
      for (const auto& outcome : done) {
        Pending item = std::move(pending_[g].front());
        pending_[g].pop_front();
        record_outcome(g, outcome, std::move(item));
      }
      waiting = waiting || !pending_[g].empty();
    }
    if (waiting) schedule_retry();
    check_drained();
  }

  // Keeps twice a block's worth of not-yet-included transactions queued.
  void top_up(const Node& node) {
    if (!s_.saturate || !emitting_) return;
    std::uint64_t pending = 0;
    for (const auto& e : mempool_.entries()) pending += node.chain.includes_tx(e.id) ? 0 : 1;
    const std::uint64_t target = 2 * gas_.max_tx_per_block();
    auto& proxy = gateways_[synthetic_].proxy();
    for (; pending < target; ++pending) {
      const Address& device = synthetic_devices_[synthetic_seq_ % kSyntheticDevices];
      Bytes payload = lpwan::generate_payload(s_.seed ^ 0x5a5a5a5aULL, device, synthetic_seq_, 12);
      ++synthetic_seq_;
      std::uint64_t dropped_before = proxy.dropped();
      auto outcome = proxy.ingest(*store_, mempool_, device, payload, sched_.now());
      handle_ingest(synthetic_, outcome, Pending{sched_.now(), std::move(payload), kNoDevice}, dropped_before);
      if (outcome.kind == lpwan::IngestOutcome::Kind::Buffered) break;
    }
  }

  // --- block production ------------------------------------------------------

  chain::Block build_block(const Node& node, std::uint64_t timestamp) {
    top_up(node);
    const auto& parent = node.chain.head();
    chain::Block b;
    b.transactions = mempool_.pack(gas_, [&](const Digest& id) { return node.chain.includes_tx(id); });
    b.header.parent_hash = parent.hash;
    b.header.height = parent.block.header.height + 1;
    b.header.timestamp = std::max(timestamp, parent.block.header.timestamp + 1);
    b.header.tx_root = chain::block_tx_root(b.transactions);
    return b;
  }

  void pow_tick(std::size_t m) {
    if (stopped_) return;
    Node& node = *nodes_[m];
    const auto* engine = setup_.pow();
    consensus::Difficulty required = engine->required_difficulty(node.chain.head().block.header, node.chain);
    chain::Block b = build_block(node, sched_.now() / 1000);
    b.header.seal = chain::PowSeal{0, required.threshold()};
    auto search = consensus::pow_seal(b.header, required, s_.hashrate, nonce_rng_.next());
    if (search.nonce) {
      std::get<chain::PowSeal>(b.header.seal).nonce = *search.nonce;
      publish(m, std::move(b), s_.propagation_delay_ms);
    }
    sched_.after(kTickMs, [this, m] { pow_tick(m); });
  }

  void pos_slot(std::uint64_t slot) {
    if (stopped_) return;
    const auto* engine = setup_.pos();
    for (std::size_t v = 0; v < setup_.producers.size(); ++v) {
      Node& node = *nodes_[v];
      const KeyPair& key = setup_.producers[v];
      if (engine->leader(node.chain.head().hash, slot) != key.address()) continue;
      chain::Block b = build_block(node, engine->slot_timestamp(slot));
      consensus::seal_pos_block(b.header, key, slot);
      publish(v, std::move(b), s_.propagation_delay_ms);
    }
    sched_.after(s_.block_interval_s * 1000, [this, slot] { pos_slot(slot + 1); });
  }

  bool validator_offline(std::size_t v) const {
    return std::find(s_.offline.begin(), s_.offline.end(), v) != s_.offline.end();
  }

  void pbft_round(std::uint64_t height, std::uint64_t view) {
    if (stopped_) return;
    const auto& config = setup_.pbft()->config();
    const std::size_t proposer = (height + view) % config.size();
    if (validator_offline(proposer)) {
      ++metrics_.view_changes;
      trace("view-change", {{"height", height}, {"view", view + 1}});
      sched_.after(s_.view_timeout_ms, [this, height, view] { pbft_round(height, view + 1); });
      return;
    }
    Node& node = *nodes_[proposer];
    chain::Block b = build_block(node, (sched_.now() + 999) / 1000);
    const Digest proposal = chain::unsealed_header_digest(b.header);
    std::vector<chain::PbftVote> votes;
    for (std::size_t v = 0; v < config.size(); ++v) {
      if (!validator_offline(v)) votes.push_back(consensus::make_vote(setup_.producers[v], proposal));
    }
    auto seal = consensus::pbft_decide(config, proposal, votes, view);
    if (!seal) {
      ++metrics_.stalled_rounds;
      trace("no-quorum", {{"height", height}, {"view", view}});
      sched_.after(s_.block_interval_s * 1000, [this, height] { pbft_round(height, 0); });
      return;
    }
    b.header.seal = std::move(*seal);
    publish(proposer, std::move(b), std::nullopt);
    sched_.after(s_.block_interval_s * 1000, [this, height] { pbft_round(height + 1, 0); });
  }

  // Appends locally, then ships to every other node after `delay_ms`, or at
  // once when there is no delay (a committed PBFT block).
  void publish(std::size_t producer, chain::Block block, std::optional<std::uint64_t> delay_ms) {
    const Digest hash = chain::hash_header(block.header);
    produced_.push_back(hash);
    producer_of_[hash] = nodes_[producer]->name;
    trace("block", {{"node", nodes_[producer]->name},
                    {"height", block.header.height},
                    {"hash", hash.hex()},
                    {"txs", block.transactions.size()}});
    auto shared = std::make_shared<const chain::Block>(std::move(block));
    deliver(producer, *shared);
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
      if (j == producer) continue;
      if (!delay_ms) {
        deliver(j, *shared);
      } else {
        sched_.after(*delay_ms, [this, j, shared] { deliver(j, *shared); }, /*delivery=*/true);
      }
    }
  }

  void deliver(std::size_t j, const chain::Block& block) {
    auto status = nodes_[j]->chain.append_block(block, *setup_.engine);
    if (status != chain::BlockStatus::Accepted && status != chain::BlockStatus::AlreadyKnown) {
      throw std::logic_error(nodes_[j]->name + " rejected block " + std::to_string(block.header.height) + ": " +
                             std::string(chain::block_status_name(status)));
    }
    if (j == observer_ && status == chain::BlockStatus::Accepted) on_observer_update();
  }

  // --- commit ----------------------------------------------------------------

  const chain::ChainState& observer_chain() const { return nodes_[observer_]->chain; }

  void check_finality() {
    const auto& c = observer_chain();
    for (std::uint64_t h = committed_hashes_.size(); h-- > 1;) {
      const auto* e = c.canonical_at(h);
      if (e != nullptr && e->hash == committed_hashes_[h]) break;
      ++metrics_.finality_violations;
      trace("finality-violation", {{"height", h}});
      if (e != nullptr) committed_hashes_[h] = e->hash;
    }
  }

  void commit_through(std::uint64_t height) {
    const auto& c = observer_chain();
    if (committed_hashes_.empty()) committed_hashes_.push_back(c.genesis().hash);
    for (std::uint64_t h = committed_hashes_.size(); h <= height; ++h) {
      const auto* entry = c.canonical_at(h);
      const auto& block = entry->block;
      auto events = registry_.apply_block(block);
      trace("commit", {{"height", h}, {"hash", entry->hash.hex()}, {"txs", block.transactions.size()}});
      std::vector<Digest> ids;
      for (std::size_t i = 0; i < block.transactions.size(); ++i) {
        const Digest id = block.transactions[i].id();
        ids.push_back(id);
        if (auto it = txs_.find(id); it != txs_.end() && !it->second.committed) {
          it->second.committed = true;
          latencies_.push_back(sched_.now() - it->second.emitted_ms);
        }
        committed_tx_ids_.push_back(id);
        const auto& e = events[i];
        trace("event", {{"device", e.device_id.hex()},
                        {"index", e.index},
                        {"timestamp", e.timestamp},
                        {"filehash", e.filehash.hex()}});
        bus_.publish(e);
      }
      std::sort(ids.begin(), ids.end());
      mempool_.remove_if([&](const Digest& id) { return std::binary_search(ids.begin(), ids.end(), id); });
      committed_hashes_.push_back(entry->hash);
    }
  }

  void on_observer_update() {
    const auto& c = observer_chain();
    check_finality();
    if (c.height() > s_.confirmations) commit_through(c.height() - s_.confirmations);
    if (s_.max_blocks != 0 && c.height() >= s_.max_blocks && emitting_) {
      emitting_ = false;
      trace("block-cap", {{"height", c.height()}});
    }
    check_drained();
  }

  void check_drained() {
    if (emitting_ || stopped_ || inflight_frames_ > 0) return;
    for (const auto& q : pending_) {
      if (!q.empty()) return;
    }
    const auto& c = observer_chain();
    for (const auto& e : mempool_.entries()) {
      if (!c.includes_tx(e.id)) return;
    }
    stopped_ = true;
  }

  // --- wrap-up ---------------------------------------------------------------

  void finalize() {
    const auto& c = observer_chain();
    check_finality();
    commit_through(c.height());

    Metrics& m = metrics_;
    m.end_time_ms = sched_.now();
    m.reorgs = c.reorg_count();
    for (const auto& n : nodes_) {
      m.max_reorg_depth = std::max(m.max_reorg_depth, n->chain.max_reorg_depth());
      if (n->chain.head().hash != c.head().hash) m.converged = false;
    }

    result_.scenario = s_;
    result_.mode = mode_;
    result_.genesis = setup_.genesis;
    std::uint64_t prev_ts = c.genesis().block.header.timestamp;
    for (const auto* e : c.canonical().subspan(1)) {
      const auto& b = e->block;
      result_.chain.push_back(b);
      std::uint64_t gas = 0;
      for (const auto& tx : b.transactions) gas += tx.gas_used;
      result_.rows.push_back(BlockRow{b.header.height, b.header.timestamp, b.header.timestamp - prev_ts,
                                      b.transactions.size(), gas, producer_of_[e->hash], e->hash.hex()});
      prev_ts = b.header.timestamp;
    }

    m.blocks = result_.chain.size();
    m.blocks_produced = produced_.size();
    m.fork_count = m.blocks_produced - m.blocks;
    if (m.blocks > 0) {
      m.min_tx_per_block = result_.rows.front().tx_count;
      for (const auto& r : result_.rows) {
        m.total_tx += r.tx_count;
        m.min_tx_per_block = std::min(m.min_tx_per_block, r.tx_count);
        m.max_tx_per_block = std::max(m.max_tx_per_block, r.tx_count);
      }
      m.mean_tx_per_block = static_cast<double>(m.total_tx) / static_cast<double>(m.blocks);
      m.simulated_duration_s = c.head().block.header.timestamp - c.genesis().block.header.timestamp;
      if (m.simulated_duration_s > 0) {
        m.tps = static_cast<double>(m.total_tx) / static_cast<double>(m.simulated_duration_s);
        m.mean_block_time_s = static_cast<double>(m.simulated_duration_s) / static_cast<double>(m.blocks);
      }
    }

    for (std::size_t g = 0; g < gateways_.size(); ++g) {
      const auto& gw = gateways_[g];
      m.duplicate_frames += gw.duplicates_dropped();
      m.proxy_retries += gw.proxy().retries();
      if (g != synthetic_) {
        m.proxy_dropped += gw.proxy().dropped();
        m.proxy_buffered += gw.proxy().buffered();
      }
    }
    m.chunks_stored = store_->handles().size();
    m.events_committed = events_.size();
    for (const auto& [id, rec] : txs_) m.uncommitted_tx += rec.committed ? 0 : 1;

    for (std::size_t i = 0; i < events_.size(); ++i) {
      const auto& e = events_[i];
      auto it = txs_.find(committed_tx_ids_[i]);
      bool ok = it != txs_.end() && content_handle(it->second.payload) == e.filehash;
      if (ok) {
        try {
          ok = store_->get(e.filehash) == it->second.payload;
        } catch (const Error&) {
          ok = false;
        }
      }
      if (!ok) ++m.payload_mismatches;
    }

    if (!latencies_.empty()) {
      std::sort(latencies_.begin(), latencies_.end());
      std::uint64_t sum = 0;
      for (auto v : latencies_) sum += v;
      const std::size_t n = latencies_.size();
      m.latency_count = n;
      m.latency_mean_ms = static_cast<double>(sum) / static_cast<double>(n);
      m.latency_p50_ms = latencies_[(n - 1) * 50 / 100];
      m.latency_p95_ms = latencies_[(n - 1) * 95 / 100];
      m.latency_max_ms = latencies_.back();
    }

    audit_thin_clients();

    const bool frames_ok = m.frames_emitted == m.frames_lost + m.frames_received;
    const bool ingest_ok = m.frames_received == m.tx_submitted + m.tx_refused + m.proxy_dropped + m.proxy_buffered;
    const bool commit_ok = m.events_committed == m.tx_submitted + m.synthetic_submitted && m.uncommitted_tx == 0;
    m.conservation = frames_ok && ingest_ok && commit_ok && m.payload_mismatches == 0;

    m.device_count = registry_.get_device_count();
    m.registry_fingerprint = registry_.fingerprint().hex();
    m.model = throughput_model(s_.gas_limit, s_.tx_gas, static_cast<double>(s_.block_interval_s));

    result_.events = events_;
    result_.metrics = m;
    result_.store = store_;
  }

  void audit_thin_clients() {
    lpwan::FullNodeService service(observer_chain());
    auto check = [&](auto matches) {
      lpwan::ThinClient client(setup_.genesis.header);
      if (!client.sync_headers(service, setup_.engine.get())) metrics_.thin_synced = false;
      ++metrics_.thin_clients;
      for (const auto& [id, rec] : txs_) {
        if (!matches(rec)) continue;
        ++metrics_.thin_checked;
        if (client.confirm(id, service) == lpwan::Confirmation::Confirmed) ++metrics_.thin_confirmed;
      }
      metrics_.thin_headers += client.header_count();
      metrics_.thin_bodies += client.transaction_count();
    };
    for (std::size_t g = 0; g < gateways_.size(); ++g) {
      if (g == synthetic_ || gateways_[g].role() != lpwan::GatewayRole::ThinClient) continue;
      check([g](const TxRecord& r) { return r.gateway == g; });
    }
    for (std::size_t d = 0; d < devices_.size(); ++d) {
      if (devices_[d].config().mode != lpwan::ClientMode::ThinClient) continue;
      check([d](const TxRecord& r) { return r.device == d; });
    }
  }

  const Scenario s_;
  registry::RegistryMode mode_;
  ChainSetup setup_;
  registry::GasSchedule gas_;
  Scheduler sched_;

  std::vector<std::unique_ptr<Node>> nodes_;
  std::size_t observer_ = 0;
  std::vector<std::size_t> gateway_node_;

  std::shared_ptr<store::StoreCluster> store_;
  registry::Mempool mempool_;
  std::vector<lpwan::Gateway> gateways_;
  std::vector<std::deque<Pending>> pending_;
  std::size_t synthetic_ = kNoDevice;
  std::vector<Address> synthetic_devices_;
  std::uint64_t synthetic_seq_ = 0;

  std::vector<lpwan::EndDevice> devices_;
  std::vector<std::size_t> device_gateway_;
  std::map<Address, std::size_t> device_index_;

  registry::Registry registry_;
  registry::EventBus bus_;
  std::vector<registry::LogAction> events_;
  std::vector<Digest> committed_tx_ids_;
  std::vector<Digest> committed_hashes_;

  std::map<Digest, TxRecord> txs_;
  std::vector<Digest> produced_;
  std::map<Digest, std::string> producer_of_;
  std::vector<std::uint64_t> latencies_;

  DeterministicRng loss_rng_;
  DeterministicRng nonce_rng_;

  bool emitting_ = true;
  bool stopped_ = false;
  bool retry_scheduled_ = false;
  std::uint64_t inflight_frames_ = 0;

  Metrics metrics_;
  RunResult result_;
};

}  // namespace

RunResult run_scenario(const Scenario& scenario, const RunOptions& options) {
  Scenario effective = scenario;
  if (options.seed) effective.seed = *options.seed;
  validate_scenario(effective);
  Simulation sim(effective, options.mode);
  return sim.run();
}

}  // namespace iotledger::sim
