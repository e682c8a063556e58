#include "iotledger/sim/setup.hpp"

#include "iotledger/chain/merkle.hpp"
#include "iotledger/common/rng.hpp"

namespace iotledger::sim {

chain::Block make_genesis(const Scenario& scenario) {
  chain::Block genesis;
  genesis.header.height = 0;
  genesis.header.timestamp = 0;
  genesis.header.tx_root = chain::block_tx_root({});
  genesis.header.seal = chain::GenesisSeal{scenario.config_digest()};
  return genesis;
}

ChainSetup build_chain_setup(const Scenario& s) {
  ChainSetup setup;
  setup.genesis = make_genesis(s);
  setup.params.block_gas_limit = s.gas_limit;

  switch (s.consensus) {
    case ConsensusKind::Pow: {
      for (std::uint64_t i = 0; i < s.miners; ++i) setup.producers.push_back(KeyPair::from_seed(derive_seed(s.seed, "miner", i)));
      std::uint64_t attempts = s.initial_attempts != 0 ? s.initial_attempts : s.miners * s.hashrate * s.block_interval_s;
      consensus::PowConfig config{consensus::Difficulty::for_expected_attempts(attempts), s.block_interval_s,
                                  consensus::RetargetPolicy{s.retarget_window, s.retarget_clamp}};
      setup.engine = std::make_unique<consensus::PowEngine>(config);
      break;
    }
    case ConsensusKind::Pos: {
      consensus::PosConfig config;
      for (std::uint64_t i = 0; i < s.stakes.size(); ++i) {
        setup.producers.push_back(KeyPair::from_seed(derive_seed(s.seed, "validator", i)));
        config.stakes[setup.producers.back().address()] = s.stakes[i];
      }
      config.chain_seed = derive_seed(s.seed, "pos-chain");
      config.slot_interval_s = s.block_interval_s;
      config.genesis_timestamp = setup.genesis.header.timestamp;
      setup.engine = std::make_unique<consensus::PosEngine>(std::move(config));
      break;
    }
    case ConsensusKind::Pbft: {
      std::vector<consensus::Validator> validators;
      for (std::uint64_t i = 0; i < s.validators; ++i) {
        setup.producers.push_back(KeyPair::from_seed(derive_seed(s.seed, "validator", i)));
        validators.push_back({setup.producers.back().address(), setup.producers.back().public_key()});
      }
      setup.engine = std::make_unique<consensus::PbftEngine>(consensus::PbftConfig(std::move(validators), s.f));
      break;
    }
  }
  return setup;
}

}  // namespace iotledger::sim
