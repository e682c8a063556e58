#include <doctest.h>

#include "iotledger/common/error.hpp"
#include "iotledger/consensus/difficulty.hpp"
#include "iotledger/consensus/pbft.hpp"
#include "iotledger/consensus/pos.hpp"
#include "iotledger/consensus/pow.hpp"
#include "stats.hpp"
#include "testkit.hpp"

using namespace iotledger;
using namespace iotledger::consensus;
using chain::BlockHeader;
using chain::BlockStatus;

namespace {

BlockHeader header_at(std::uint64_t ts) {
  BlockHeader h;
  h.parent_hash = derive_seed(3, "parent");
  h.timestamp = ts;
  h.height = 1;
  return h;
}

}  // namespace

// --- Proof of work -----------------------------------------------------------

TEST_CASE("difficulty rejects a zero threshold") {
  CHECK_THROWS_AS(Difficulty(U256{}), Error);
  CHECK(Difficulty::for_expected_attempts(1).threshold() == U256::max());
  CHECK(Difficulty::for_expected_attempts(256).expected_attempts() == doctest::Approx(256.0).epsilon(1e-9));
}

TEST_CASE("maximal threshold: the first nonce succeeds") {
  auto r = pow_seal(header_at(1), Difficulty(U256::max()), 10, 42);
  REQUIRE(r.nonce);
  CHECK(*r.nonce == 42);
  CHECK(r.attempts == 1);
}

TEST_CASE("threshold 2^248: mean attempts over 1000 seals is geometric around 256") {
  Difficulty d(U256::pow2(248));
  std::uint64_t total = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    auto r = pow_seal(header_at(i + 1), d, 1'000'000, 0);
    REQUIRE(r.nonce);
    CHECK(pow_verify(header_at(i + 1), chain::PowSeal{*r.nonce, d.threshold()}, d));
    total += r.attempts;
  }
  double mean = static_cast<double>(total) / 1000.0;
  CHECK(mean >= 128.0);
  CHECK(mean <= 512.0);
}

TEST_CASE("seal mutations fail verification at one hash each") {
  Difficulty d(U256::pow2(248));
  BlockHeader h = header_at(77);
  auto r = pow_seal(h, d, 1'000'000, 0);
  REQUIRE(r.nonce);
  CHECK(r.next_nonce == *r.nonce + 1);
  std::uint64_t bad = *r.nonce + 1;
  while (d.accepts(pow_hash(h, bad))) ++bad;
  std::uint64_t before = pow_hash_invocations();
  CHECK_FALSE(pow_verify(h, chain::PowSeal{bad, d.threshold()}, d));
  CHECK(pow_verify(h, chain::PowSeal{*r.nonce, d.threshold()}, d));
  CHECK(pow_hash_invocations() - before == 2);

  BlockHeader moved = h;
  moved.timestamp += 1;
  CHECK(pow_hash(moved, *r.nonce) != pow_hash(h, *r.nonce));
}

TEST_CASE("an exhausted budget reports where to resume") {
  Difficulty tiny(U256(1));
  auto r = pow_seal(header_at(1), tiny, 50, 10);
  CHECK_FALSE(r.nonce);
  CHECK(r.attempts == 50);
  CHECK(r.next_nonce == 60);
}

TEST_CASE("retarget is proportional and clamped") {
  Difficulty d(U256::pow2(200));
  std::vector<std::uint64_t> on_target(16, 14);
  CHECK(retarget(on_target, d, 14) == d);
  std::vector<std::uint64_t> slow(16, 28);
  CHECK(retarget(slow, d, 14).threshold() == U256::pow2(201));
  std::vector<std::uint64_t> fast(16, 7);
  CHECK(retarget(fast, d, 14).threshold() == U256::pow2(199));
  std::vector<std::uint64_t> very_slow(16, 1000);
  CHECK(retarget(very_slow, d, 14).threshold() == U256::pow2(202));
  std::vector<std::uint64_t> very_fast(16, 0);
  CHECK(retarget(very_fast, d, 14).threshold() == U256::pow2(198));
  CHECK_THROWS(retarget(std::vector<std::uint64_t>{}, d, 14));
}

TEST_CASE("closed-loop retargeting settles the block time") {
  // One miner at 64 attempts per second against a 14 s target, starting four
  // times too hard. Block times after ten windows must average within 25%.
  const std::uint64_t hashrate = 64;
  const std::uint64_t target = 14;
  PowEngine engine(PowConfig{Difficulty::for_expected_attempts(hashrate * target * 4), target, {16, 4}});
  chain::ChainState state(testkit::genesis_block(), testkit::params());
  std::uint64_t now = 0;
  std::uint64_t nonce = 0;
  std::vector<std::uint64_t> late_intervals;
  for (std::uint64_t height = 1; height <= 16 * 20; ++height) {
    const BlockHeader& parent = state.head().block.header;
    Difficulty d = engine.required_difficulty(parent, state);
    for (;;) {
      ++now;
      BlockHeader h;
      h.parent_hash = state.head().hash;
      h.height = height;
      h.timestamp = now;
      h.tx_root = chain::block_tx_root(std::vector<chain::Transaction>{});
      auto r = pow_seal(h, d, hashrate, nonce);
      nonce = r.next_nonce;
      if (!r.nonce) continue;
      h.seal = chain::PowSeal{*r.nonce, d.threshold()};
      REQUIRE(state.append_block(chain::Block{h, {}}, engine) == BlockStatus::Accepted);
      if (height > 16 * 10) late_intervals.push_back(h.timestamp - parent.timestamp);
      break;
    }
  }
  double mean = 0;
  for (auto v : late_intervals) mean += static_cast<double>(v);
  mean /= static_cast<double>(late_intervals.size());
  CHECK(mean >= target * 0.75);
  CHECK(mean <= target * 1.25);
}

TEST_CASE("PoW engine rejects a wrong threshold in the seal") {
  PowEngine engine(PowConfig{Difficulty(U256::pow2(250)), 14, {}});
  chain::ChainState state(testkit::genesis_block(), testkit::params());
  BlockHeader h;
  h.parent_hash = state.head().hash;
  h.height = 1;
  h.timestamp = 14;
  auto r = pow_seal(h, Difficulty(U256::pow2(250)), 100000, 0);
  REQUIRE(r.nonce);
  h.seal = chain::PowSeal{*r.nonce, U256::max()};
  CHECK(state.append_block(chain::Block{h, {}}, engine) == BlockStatus::BadSeal);
  h.seal = chain::PowSeal{*r.nonce, U256::pow2(250)};
  CHECK(state.append_block(chain::Block{h, {}}, engine) == BlockStatus::Accepted);
}

// --- Proof of stake ----------------------------------------------------------

TEST_CASE("chi-squared helper matches known quantiles") {
  // 3.841 is the 95% point of chi-squared with one degree of freedom.
  auto r = teststats::chi_squared({60, 40}, {0.5, 0.5});
  CHECK(r.statistic == doctest::Approx(4.0));
  CHECK(r.p_value == doctest::Approx(0.0455).epsilon(0.01));
  CHECK(boost::math::gamma_q(0.5, 3.841 / 2) == doctest::Approx(0.05).epsilon(0.001));
  CHECK(boost::math::gamma_q(1.5, 7.815 / 2) == doctest::Approx(0.05).epsilon(0.001));
}

TEST_CASE("stake-weighted selection") {
  Address a = testkit::device(1), b = testkit::device(2);
  StakeTable single{{a, 5}};
  for (std::uint64_t i = 0; i < 100; ++i) CHECK(pos_select(single, derive_seed(9, "s", i)) == a);

  StakeTable zero_a{{a, 0}, {b, 1}};
  for (std::uint64_t i = 0; i < 1000; ++i) CHECK(pos_select(zero_a, derive_seed(9, "z", i)) == b);

  CHECK_THROWS_AS(pos_select(StakeTable{{a, 0}}, derive_seed(9, "x")), Error);

  StakeTable one_three{{a, 1}, {b, 3}};
  std::uint64_t b_wins = 0;
  for (std::uint64_t i = 0; i < 10'000; ++i) b_wins += pos_select(one_three, derive_seed(9, "ab", i)) == b;
  double freq = static_cast<double>(b_wins) / 10'000.0;
  CHECK(freq >= 0.73);
  CHECK(freq <= 0.77);

  CHECK(pos_select(one_three, derive_seed(9, "d")) == pos_select(one_three, derive_seed(9, "d")));
}

TEST_CASE("selection frequencies pass chi-squared against the stake table") {
  StakeTable stakes;
  for (std::uint64_t i = 0; i < 4; ++i) stakes[testkit::device(i)] = 10 * (i + 1);
  auto fit = teststats::pos_selection_fit(stakes, 10'000, 17);
  CHECK(fit.dof == 3.0);
  CHECK(fit.p_value > 0.01);
}

TEST_CASE("PoS engine accepts only the elected leader at its slot time") {
  KeyPair v0 = testkit::key(10), v1 = testkit::key(11);
  PosEngine engine(PosConfig{{{v0.address(), 1}, {v1.address(), 1}}, derive_seed(5, "chain"), 14, 0});
  chain::ChainState state(testkit::genesis_block(), testkit::params());
  std::uint64_t slot = 1;
  for (int produced = 0; produced < 10; ++slot) {
    BlockHeader h;
    h.parent_hash = state.head().hash;
    h.height = state.height() + 1;
    h.timestamp = engine.slot_timestamp(slot);
    Address leader = engine.leader(h.parent_hash, slot);
    const KeyPair& good = leader == v0.address() ? v0 : v1;
    const KeyPair& other = leader == v0.address() ? v1 : v0;

    BlockHeader wrong = h;
    seal_pos_block(wrong, other, slot);
    CHECK(state.append_block(chain::Block{wrong, {}}, engine) == BlockStatus::BadSeal);
    BlockHeader late = h;
    late.timestamp += 1;
    seal_pos_block(late, good, slot);
    CHECK(state.append_block(chain::Block{late, {}}, engine) == BlockStatus::BadSeal);

    seal_pos_block(h, good, slot);
    REQUIRE(state.append_block(chain::Block{h, {}}, engine) == BlockStatus::Accepted);
    ++produced;
  }
  CHECK(state.height() == 10);
  CHECK(pos_draw_seed(derive_seed(5, "chain"), state.head().hash, 3) !=
        pos_draw_seed(derive_seed(5, "chain"), state.head().hash, 4));
}

// --- PBFT --------------------------------------------------------------------

namespace {

std::vector<KeyPair> validator_keys(std::size_t n) {
  std::vector<KeyPair> keys;
  for (std::size_t i = 0; i < n; ++i) keys.push_back(testkit::key(100 + i));
  return keys;
}

PbftConfig config_of(const std::vector<KeyPair>& keys, std::uint64_t f) {
  std::vector<Validator> vs;
  for (const auto& k : keys) vs.push_back({k.address(), k.public_key()});
  return PbftConfig(vs, f);
}

}  // namespace

TEST_CASE("quorum is 2f + 1") {
  CHECK(quorum_size(config_of(validator_keys(4), 1)) == 3);
  CHECK(quorum_size(config_of(validator_keys(7), 2)) == 5);
  CHECK(quorum_size(config_of(validator_keys(1), 0)) == 1);
  CHECK_THROWS_AS(config_of(validator_keys(3), 1), Error);
  CHECK_THROWS_AS(config_of({}, 0), Error);
  auto keys = validator_keys(3);
  keys.push_back(keys[0]);
  CHECK_THROWS_AS(config_of(keys, 1), Error);
}

TEST_CASE("pbft_decide needs a quorum of identical signed votes") {
  auto keys = validator_keys(4);
  auto cfg = config_of(keys, 1);
  Digest p = derive_seed(1, "proposal"), q = derive_seed(1, "other");

  std::vector<chain::PbftVote> three{make_vote(keys[0], p), make_vote(keys[1], p), make_vote(keys[2], p)};
  auto cert = pbft_decide(cfg, p, three, 2);
  REQUIRE(cert);
  CHECK(cert->view == 2);
  CHECK(cert->votes.size() == 3);

  std::vector<chain::PbftVote> split{make_vote(keys[0], p), make_vote(keys[1], p), make_vote(keys[2], q)};
  CHECK_FALSE(pbft_decide(cfg, p, split));

  auto forged = make_vote(keys[2], p);
  forged.signature = keys[3].sign(chain::pbft_vote_message(p));
  std::vector<chain::PbftVote> with_forgery{make_vote(keys[0], p), make_vote(keys[1], p), forged};
  CHECK_FALSE(pbft_decide(cfg, p, with_forgery));

  std::vector<chain::PbftVote> outsider{make_vote(keys[0], p), make_vote(testkit::key(999), p)};
  CHECK_THROWS_AS(pbft_decide(cfg, p, outsider), Error);
  std::vector<chain::PbftVote> twice{make_vote(keys[0], p), make_vote(keys[0], p), make_vote(keys[1], p)};
  CHECK_THROWS_AS(pbft_decide(cfg, p, twice), Error);
}

TEST_CASE("proposer rotates with height and view") {
  auto cfg = config_of(validator_keys(4), 1);
  CHECK(cfg.proposer(1, 0).address == cfg.validators()[1].address);
  CHECK(cfg.proposer(1, 1).address == cfg.validators()[2].address);
  CHECK(cfg.proposer(3, 2).address == cfg.validators()[1].address);
}

TEST_CASE("PBFT engine: certified blocks only, and never a fork") {
  auto keys = validator_keys(4);
  PbftEngine engine(config_of(keys, 1));
  chain::ChainState state(testkit::genesis_block(), testkit::params());
  auto certify = [&](BlockHeader h, std::size_t voters) {
    Digest proposal = chain::unsealed_header_digest(h);
    chain::PbftSeal seal;
    for (std::size_t i = 0; i < voters; ++i) seal.votes.push_back(make_vote(keys[i], proposal));
    h.seal = seal;
    return h;
  };
  BlockHeader h;
  h.parent_hash = state.head().hash;
  h.height = 1;
  h.timestamp = 14;
  CHECK(state.append_block(chain::Block{certify(h, 2), {}}, engine) == BlockStatus::BadSeal);
  REQUIRE(state.append_block(chain::Block{certify(h, 3), {}}, engine) == BlockStatus::Accepted);

  BlockHeader rival = h;
  rival.timestamp = 15;
  CHECK_THROWS_AS(state.append_block(chain::Block{certify(rival, 4), {}}, engine), Error);
  CHECK(state.tips().size() == 1);
}
