#include "iotledger/consensus/pbft.hpp"

#include <algorithm>
#include <set>

#include "iotledger/common/error.hpp"

namespace iotledger::consensus {

PbftConfig::PbftConfig(std::vector<Validator> validators, std::uint64_t f)
    : validators_(std::move(validators)), f_(f) {
  if (validators_.empty()) throw Error(ErrorCode::InvalidPbftConfig, "empty validator set");
  if (validators_.size() < 3 * f_ + 1) {
    throw Error(ErrorCode::InvalidPbftConfig, "n=" + std::to_string(validators_.size()) +
                                                  " below 3f+1 for f=" + std::to_string(f_));
  }
  std::set<Address> seen;
  for (const auto& v : validators_) {
    if (address_of(v.key) != v.address) throw Error(ErrorCode::InvalidPbftConfig, "address/key mismatch");
    if (!seen.insert(v.address).second) throw Error(ErrorCode::InvalidPbftConfig, "duplicate validator");
  }
}

std::optional<std::size_t> PbftConfig::index_of(const Address& a) const {
  for (std::size_t i = 0; i < validators_.size(); ++i) {
    if (validators_[i].address == a) return i;
  }
  return std::nullopt;
}

std::uint64_t quorum_size(const PbftConfig& config) { return 2 * config.f() + 1; }

chain::PbftVote make_vote(const KeyPair& validator, const Digest& proposal) {
  return chain::PbftVote{validator.address(), validator.public_key(), proposal,
                         validator.sign(chain::pbft_vote_message(proposal))};
}

namespace {

bool vote_signature_ok(const PbftConfig& config, const chain::PbftVote& vote) {
  auto idx = config.index_of(vote.validator);
  if (!idx || config.validators()[*idx].key != vote.validator_key) return false;
  return verify_signature(vote.validator_key, chain::pbft_vote_message(vote.proposal), vote.signature);
}

}  // namespace

std::optional<chain::PbftSeal> pbft_decide(const PbftConfig& config, const Digest& proposal,
                                           std::span<const chain::PbftVote> votes, std::uint64_t view) {
  std::set<Address> voters;
  std::vector<std::pair<std::size_t, chain::PbftVote>> matching;
  for (const auto& vote : votes) {
    auto idx = config.index_of(vote.validator);
    if (!idx) throw Error(ErrorCode::UnknownValidator, vote.validator.hex());
    if (!voters.insert(vote.validator).second) throw Error(ErrorCode::DuplicateVoter, vote.validator.hex());
    if (vote.proposal == proposal && vote_signature_ok(config, vote)) matching.emplace_back(*idx, vote);
  }
  if (matching.size() < quorum_size(config)) return std::nullopt;

  std::sort(matching.begin(), matching.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  chain::PbftSeal seal;
  seal.view = view;
  for (auto& [idx, vote] : matching) seal.votes.push_back(std::move(vote));
  return seal;
}

bool PbftEngine::verify_seal(const chain::BlockHeader& header, const chain::BlockHeader&,
                             const chain::HeaderLookup&) const {
  const auto* seal = std::get_if<chain::PbftSeal>(&header.seal);
  if (seal == nullptr) return false;
  const Digest proposal = chain::unsealed_header_digest(header);
  std::set<Address> voters;
  for (const auto& vote : seal->votes) {
    if (vote.proposal != proposal) return false;
    if (!voters.insert(vote.validator).second) return false;
    if (!vote_signature_ok(config_, vote)) return false;
  }
  return voters.size() >= quorum_size(config_);
}

}  // namespace iotledger::consensus
