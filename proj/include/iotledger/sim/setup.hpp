#pragma once

#include <memory>
#include <vector>

#include "iotledger/chain/block.hpp"
#include "iotledger/chain/chain_state.hpp"
#include "iotledger/common/keys.hpp"
#include "iotledger/consensus/pbft.hpp"
#include "iotledger/consensus/pos.hpp"
#include "iotledger/consensus/pow.hpp"
#include "iotledger/sim/scenario.hpp"

namespace iotledger::sim {

/// Everything about a chain that follows from (scenario, seed): the genesis
/// block, the block producers' keys and the seal verifier.
struct ChainSetup {
  chain::Block genesis;
  std::vector<KeyPair> producers;  // miners or validators, in index order
  std::unique_ptr<chain::SealVerifier> engine;

  const consensus::PowEngine* pow() const { return dynamic_cast<const consensus::PowEngine*>(engine.get()); }
  const consensus::PosEngine* pos() const { return dynamic_cast<const consensus::PosEngine*>(engine.get()); }
  const consensus::PbftEngine* pbft() const { return dynamic_cast<const consensus::PbftEngine*>(engine.get()); }
  chain::ChainParams params;
};

ChainSetup build_chain_setup(const Scenario& scenario);

/// Genesis header: height 0, timestamp 0, zero parent and tx root, sealed with
/// the scenario's config digest.
chain::Block make_genesis(const Scenario& scenario);

}  // namespace iotledger::sim
