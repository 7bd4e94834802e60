// Copyright 2026 The FPPDL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "fppdl/crypto/codec.hpp"
#include "fppdl/crypto/keystream.hpp"
#include "fppdl/crypto/primitives.hpp"
#include "fppdl/economy/points.hpp"
#include "fppdl/evaluation/credibility.hpp"
#include "fppdl/learner/dataset.hpp"
#include "fppdl/learner/model.hpp"
#include "fppdl/learner/train.hpp"
#include "fppdl/ledger/chain.hpp"
#include "fppdl/ledger/log.hpp"
#include "fppdl/protocol/config.hpp"

namespace fppdl::protocol {

// Training-set indices per honest party, in honest-ordinal order.
std::vector<std::vector<std::size_t>> plan_shards(const ExperimentConfig& config,
                                                  std::size_t train_size);

// Sharing level per party id (the free rider included).
std::vector<double> sharing_levels(const ExperimentConfig& config);

struct PartyState {
  PartyId id = 0;
  bool honest = true;
  // Randomness key: the honest ordinal, so inserting a free rider does not
  // shift any honest party's streams.
  std::uint64_t slot = 0;
  std::shared_ptr<const learner::Dataset> shard;
  std::size_t nominal_size = 0;  // |D_i| as advertised
  double lambda = 0.1;
  std::size_t u = 0;  // published samples per evaluation
  std::shared_ptr<const evaluation::SamplePublisher> publisher;
  std::shared_ptr<const crypto::KeyBundle> keys;

  learner::Mlp model{std::vector<std::size_t>{1, 1}};
  learner::SgdState sgd;
  Rng shuffle_rng;
  crypto::Drbg onion_rng{crypto::Seed32{}};
  evaluation::CredibilityLedger credibility;
  bool alive = true;
  std::optional<std::uint64_t> banned_round;

  double standalone_acc = 0;  // after pre-training
  double last_acc = 0;
  double best_acc = 0;
};

struct PartyRound {
  PartyId id = 0;
  bool alive = true;
  double accuracy = 0;
  double best_accuracy = 0;
  std::uint64_t balance = 0;
};

struct RoundReport {
  std::uint64_t round = 0;
  std::vector<PartyRound> parties;
  std::vector<PartyId> banned;
  std::size_t credible_count = 0;
  std::uint64_t ledger_height = 0;
  // Chain-derived totals after the round.
  std::uint64_t minted_total = 0;
  std::uint64_t live_total = 0;
  std::uint64_t frozen_total = 0;
};

// Benchmarking and collaborative rounds over in-process parties, a single
// validator and an in-process pad dealer.
class Federation {
 public:
  Federation(const ExperimentConfig& config, const learner::DataSource& data);

  // Turns an honest party into a free rider: no data, Gaussian-noise samples,
  // uniform random labels, zero uploads. Only valid before benchmarking.
  void inject_free_rider(PartyId party);

  // Pre-training, publication, cross-labeling, credibility, bans, points and
  // the genesis block. Throws kProtocol when fewer than two parties remain.
  RoundReport run_benchmarking();

  // One collaborative round. On any failure the federation is restored to
  // its state at round start and the error is rethrown.
  RoundReport run_round(std::uint64_t round);

  const ExperimentConfig& config() const { return config_; }
  const std::vector<PartyState>& parties() const { return state_.parties; }
  const PartyState& party(PartyId id) const { return state_.parties.at(id); }
  const std::vector<PartyId>& credible_set() const { return state_.credible; }
  const ledger::Chain& chain() const { return state_.chain; }
  const economy::PointsBook& book() const { return state_.book; }
  const crypto::FixedPointCodec& codec() const { return codec_; }
  std::size_t param_count() const { return param_count_; }
  bool benchmarked() const { return state_.benchmarked; }

  const std::string& credibility_csv() const { return state_.credibility_csv; }
  const std::string& balances_csv() const { return state_.balances_csv; }

  // Testing hook: fails the next run_round after its UPLOAD block commits.
  void fail_next_round_for_testing() { fail_next_round_ = true; }

 private:
  struct State {
    std::vector<PartyState> parties;
    std::vector<PartyId> credible;
    ledger::Chain chain;
    economy::PointsBook book;
    std::set<std::pair<crypto::MessageId, std::uint64_t>> used_messages;
    std::string credibility_csv;
    std::string balances_csv;
    bool benchmarked = false;
  };

  // Published batch and every credible party's labels for it.
  evaluation::LabelMatrix label_batch(const PartyState& publisher,
                                      const learner::RowMatrix& batch,
                                      std::uint64_t round) const;
  std::map<PartyId, std::map<PartyId, double>> fresh_scores(std::uint64_t round) const;

  // Flag/report/ban passes until stable; appends REPORT and BAN transactions.
  std::vector<PartyId> ban_passes(std::uint64_t round, std::vector<ledger::Transaction>& txs);

  double accuracy(const learner::Mlp& model) const;
  void check_balances(std::uint64_t round) const;
  RoundReport make_report(std::uint64_t round, std::vector<PartyId> banned) const;
  void run_round_unchecked(std::uint64_t round, std::vector<PartyId>& banned);

  ExperimentConfig config_;
  const learner::DataSource* data_;
  std::optional<learner::Dataset> limited_test_;
  const learner::Dataset* test_;
  std::size_t param_count_ = 0;
  crypto::FixedPointCodec codec_;
  crypto::KeystreamDealer dealer_;
  std::shared_ptr<const crypto::KeyBundle> validator_;
  learner::Mlp w0_;
  bool fail_next_round_ = false;
  State state_;
};

}  // namespace fppdl::protocol
