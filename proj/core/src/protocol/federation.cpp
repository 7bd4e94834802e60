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

#include "fppdl/protocol/federation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fppdl/common/error.hpp"
#include "fppdl/crypto/onion.hpp"
#include "fppdl/ledger/block.hpp"

namespace fppdl::protocol {
namespace {

constexpr std::uint64_t kFreeRiderSlotBase = 1'000'000;

std::uint64_t free_rider_slot(PartyId id) { return kFreeRiderSlotBase + id; }

// Image geometry for exported sample fragments: square when possible.
std::pair<std::uint32_t, std::uint32_t> sample_geometry(std::size_t dim) {
  const auto side = static_cast<std::uint32_t>(std::lround(std::sqrt(static_cast<double>(dim))));
  if (std::size_t{side} * side == dim) return {side, side};
  return {1, static_cast<std::uint32_t>(dim)};
}

crypto::FixedPointCodec make_codec(const ExperimentConfig& c) {
  const double max_word = std::ceil(c.clip * std::ldexp(1.0, c.scale_bits));
  require(max_word < std::ldexp(1.0, 60), ErrorCode::kConfig, "clip and scale_bits overflow");
  // M = 2^ceil(log2(p n)) bounds unsigned sums; signed words use
  // both halves of the ring, hence 2 p.
  const std::uint64_t needed =
      crypto::derive_modulus(2 * static_cast<std::uint64_t>(max_word), c.parties);
  const std::uint64_t floor_modulus = std::uint64_t{1} << crypto::FixedPointCodec::kDefaultModulusBits;
  return crypto::FixedPointCodec(c.scale_bits, std::max(needed, floor_modulus));
}

}  // namespace

std::vector<std::vector<std::size_t>> plan_shards(const ExperimentConfig& config,
                                                  std::size_t train_size) {
  const std::size_t honest = config.honest_count();
  const std::size_t needed = config.setting == 3 ? config.setting3_total()
                                                 : honest * config.shard_size;
  require(needed <= train_size, ErrorCode::kConfig,
          "federation needs " + std::to_string(needed) + " training examples, source has " +
              std::to_string(train_size));
  Rng rng = make_rng(config.seeds.data, {tag(Stream::kShardSplit)});
  std::vector<std::size_t> perm(train_size);
  std::iota(perm.begin(), perm.end(), 0);
  // Partial shuffle of the prefix we use.
  for (std::size_t i = 0; i < needed; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, train_size - 1);
    std::swap(perm[i], perm[pick(rng)]);
  }
  std::vector<std::size_t> sizes(honest, config.shard_size);
  if (config.setting == 3) {
    Rng cuts_rng = make_rng(config.seeds.data, {tag(Stream::kPartition)});
    const std::size_t total = config.setting3_total();
    std::uniform_int_distribution<std::size_t> cut(0, total);
    for (std::size_t attempt = 0;; ++attempt) {
      require(attempt < 100000, ErrorCode::kConfig, "could not draw a Setting 3 partition");
      std::vector<std::size_t> cuts(honest - 1);
      for (auto& c : cuts) c = cut(cuts_rng);
      std::sort(cuts.begin(), cuts.end());
      std::size_t prev = 0;
      bool ok = true;
      for (std::size_t k = 0; k < honest; ++k) {
        const std::size_t end = k + 1 < honest ? cuts[k] : total;
        sizes[k] = end - prev;
        ok = ok && sizes[k] >= config.min_shard;
        prev = end;
      }
      if (ok) break;
    }
  }
  std::vector<std::vector<std::size_t>> shards(honest);
  std::size_t offset = 0;
  for (std::size_t k = 0; k < honest; ++k) {
    shards[k].assign(perm.begin() + static_cast<std::ptrdiff_t>(offset),
                     perm.begin() + static_cast<std::ptrdiff_t>(offset + sizes[k]));
    offset += sizes[k];
  }
  return shards;
}

std::vector<double> sharing_levels(const ExperimentConfig& config) {
  std::vector<double> out(config.parties, config.lambda);
  if (config.setting != 2) return out;
  std::uniform_real_distribution<double> dist(config.lambda_min, config.lambda_max);
  for (std::size_t id = 0; id < config.parties; ++id) {
    Rng rng = make_rng(config.seeds.data, {tag(Stream::kSharingLevel), id});
    out[id] = dist(rng);
  }
  return out;
}

Federation::Federation(const ExperimentConfig& config, const learner::DataSource& data)
    : config_(config),
      data_(&data),
      test_(&data.test()),
      codec_(make_codec(config)),
      dealer_(derive_seed(config.seeds.sampling, {tag(Stream::kDealer)})),
      w0_(std::vector<std::size_t>{1, 1}) {
  config_.validate();
  require(!data.test().empty(), ErrorCode::kConfig, "test set is empty");
  if (config_.test_limit && config_.test_limit < data.test().size()) {
    std::vector<std::size_t> idx(config_.test_limit);
    std::iota(idx.begin(), idx.end(), 0);
    limited_test_ = data.test().subset(idx);
    test_ = &*limited_test_;
  }

  std::vector<std::size_t> arch = {test_->dim()};
  arch.insert(arch.end(), config_.hidden.begin(), config_.hidden.end());
  arch.push_back(10);
  w0_ = learner::Mlp(arch);
  Rng init = make_rng(config_.seeds.model, {tag(Stream::kModelInit)});
  w0_.init_glorot(init);
  param_count_ = w0_.param_count();

  {
    crypto::Drbg drbg(derive_seed(config_.seeds.sampling, {tag(Stream::kKeys), ledger::kValidatorId}));
    validator_ = std::make_shared<const crypto::KeyBundle>(crypto::KeyBundle::generate(drbg));
  }

  const auto shards = plan_shards(config_, data.train_size());
  const auto lambdas = sharing_levels(config_);
  std::size_t ordinal = 0;
  for (std::size_t id = 0; id < config_.parties; ++id) {
    const auto pid = static_cast<PartyId>(id);
    crypto::Drbg drbg(derive_seed(config_.seeds.sampling, {tag(Stream::kKeys), id}));
    auto keys = std::make_shared<const crypto::KeyBundle>(crypto::KeyBundle::generate(drbg));
    PartyState p;
    p.id = pid;
    p.model = w0_;
    p.onion_rng = crypto::Drbg(keys->entropy);
    p.keys = std::move(keys);
    p.lambda = lambdas[id];
    if (config_.free_rider && *config_.free_rider == id) {
      p.honest = false;
      p.slot = free_rider_slot(pid);
    } else {
      p.slot = ordinal;
      p.shard = std::make_shared<const learner::Dataset>(data.train_subset(shards[ordinal]));
      p.nominal_size = p.shard->size();
      p.publisher =
          std::make_shared<const evaluation::NoisySubsamplePublisher>(p.shard->images, config_.noise_scale);
      ++ordinal;
    }
    p.shuffle_rng = make_rng(config_.seeds.sampling, {tag(Stream::kShuffle), p.slot});
    state_.parties.push_back(std::move(p));
  }
  if (config_.free_rider) inject_free_rider(static_cast<PartyId>(*config_.free_rider));
}

void Federation::inject_free_rider(PartyId id) {
  require(!state_.benchmarked, ErrorCode::kProtocol, "free riders are injected before benchmarking");
  require(id < state_.parties.size(), ErrorCode::kUnknownParty, "free rider index out of range");
  PartyState& p = state_.parties[id];
  // Advertise an honest-looking shard size so lambda and points look normal.
  std::size_t nominal = config_.shard_size;
  if (config_.setting == 3) nominal = config_.setting3_total() / config_.honest_count();
  if (p.shard) nominal = p.shard->size();
  p.honest = false;
  p.shard.reset();
  p.nominal_size = nominal;
  p.publisher = std::make_shared<const evaluation::GaussianNoisePublisher>(nominal, test_->dim());
}

double Federation::accuracy(const learner::Mlp& model) const {
  return learner::evaluate(model, *test_);
}

evaluation::LabelMatrix Federation::label_batch(const PartyState& publisher,
                                                const learner::RowMatrix& batch,
                                                std::uint64_t round) const {
  evaluation::LabelMatrix m(state_.credible, static_cast<std::size_t>(batch.rows()));
  for (std::size_t c = 0; c < state_.credible.size(); ++c) {
    const PartyState& labeler = state_.parties[state_.credible[c]];
    std::vector<int> labels;
    if (labeler.honest) {
      labels = learner::predict_labels(labeler.model, batch);
    } else {
      Rng rng = make_rng(config_.seeds.sampling,
                         {tag(Stream::kFreeRiderLabels), labeler.slot, round, publisher.id});
      std::uniform_int_distribution<int> pick(0, static_cast<int>(labeler.model.output_dim()) - 1);
      labels.resize(m.rows);
      for (int& l : labels) l = pick(rng);
    }
    m.set_column(c, labels);
  }
  return m;
}

std::map<PartyId, std::map<PartyId, double>> Federation::fresh_scores(std::uint64_t round) const {
  std::map<PartyId, std::map<PartyId, double>> out;
  for (PartyId i : state_.credible) {
    const PartyState& p = state_.parties[i];
    Rng rng = make_rng(config_.seeds.sampling, {tag(Stream::kPublish), p.slot, round});
    const learner::RowMatrix batch = p.publisher->publish(p.u, rng);
    out[i] = evaluation::raw_scores(label_batch(p, batch, round), i);
  }
  return out;
}

std::vector<PartyId> Federation::ban_passes(std::uint64_t round,
                                            std::vector<ledger::Transaction>& txs) {
  std::vector<PartyId> banned_all;
  for (std::uint32_t pass = 1; state_.credible.size() >= 2; ++pass) {
    const double cth = config_.cth.value_or(evaluation::compute_cth(state_.credible.size()));
    std::map<PartyId, std::vector<PartyId>> reports;
    for (PartyId i : state_.credible) {
      auto flagged = evaluation::flag_low_contribution(state_.parties[i].credibility, cth);
      if (flagged.empty()) continue;
      txs.push_back(ledger::Transaction::make_signed(
          i, ledger::ReportBody{round, pass, flagged}, state_.parties[i].keys->signing.secret_key));
      reports[i] = std::move(flagged);
    }
    const evaluation::BanOutcome outcome =
        evaluation::collect_reports_and_ban(reports, state_.credible);
    if (outcome.banned.empty()) break;
    for (PartyId b : outcome.banned) {
      txs.push_back(ledger::Transaction::make_signed(ledger::kValidatorId,
                                                     ledger::BanBody{round, pass, b},
                                                     validator_->signing.secret_key));
      state_.parties[b].alive = false;
      state_.parties[b].banned_round = round;
      banned_all.push_back(b);
    }
    state_.credible = outcome.remaining;
    for (PartyId i : state_.credible) {
      for (PartyId b : outcome.banned) state_.parties[i].credibility.remove(b);
    }
  }
  return banned_all;
}

RoundReport Federation::run_benchmarking() {
  require(!state_.benchmarked, ErrorCode::kProtocol, "benchmarking already ran");
  learner::SgdConfig pretrain = config_.sgd;
  pretrain.epochs = config_.pretrain_epochs;
  for (PartyState& p : state_.parties) {
    if (p.honest && config_.pretrain_epochs > 0) {
      learner::train_local(p.model, *p.shard, pretrain, p.sgd, p.shuffle_rng);
    }
    p.standalone_acc = p.last_acc = p.best_acc = accuracy(p.model);
    p.u = std::max<std::size_t>(1, economy::floor_points(p.lambda * static_cast<double>(p.nominal_size)));
  }

  state_.credible.clear();
  for (const PartyState& p : state_.parties) state_.credible.push_back(p.id);

  // Sample commitments for the INIT transactions: the round-0 batches.
  std::map<PartyId, Digest> commitments;
  const auto [rows, cols] = sample_geometry(test_->dim());
  for (PartyState& p : state_.parties) {
    Rng rng = make_rng(config_.seeds.sampling, {tag(Stream::kPublish), p.slot, 0});
    const learner::RowMatrix batch = p.publisher->publish(p.u, rng);
    commitments[p.id] = crypto::sha256(evaluation::export_samples_idx(batch, rows, cols));
    p.credibility.owner = p.id;
    p.credibility.scores = evaluation::raw_scores(label_batch(p, batch, 0), p.id);
    p.credibility.normalize();
  }

  std::vector<ledger::Transaction> votes;
  std::vector<PartyId> banned = ban_passes(0, votes);
  require(state_.credible.size() >= 2, ErrorCode::kProtocol,
          "benchmarking left " + std::to_string(state_.credible.size()) +
              " credible parties; at least two are required");

  std::vector<ledger::Transaction> txs;
  txs.push_back(ledger::Transaction::make_signed(
      ledger::kValidatorId,
      ledger::InitBody{0, Digest{}, validator_->signing.public_key, validator_->recipient.public_key},
      validator_->signing.secret_key));
  for (const PartyState& p : state_.parties) {
    const std::uint64_t points =
        p.alive ? economy::init_points(p.lambda, param_count_, state_.credible.size()) : 0;
    txs.push_back(ledger::Transaction::make_signed(
        p.id,
        ledger::InitBody{points, commitments[p.id], p.keys->signing.public_key,
                         p.keys->recipient.public_key},
        p.keys->signing.secret_key));
    state_.book.open(p.id, points);
  }
  txs.insert(txs.end(), votes.begin(), votes.end());
  state_.chain.append(ledger::make_genesis(std::move(txs)));
  for (PartyId b : banned) state_.book.freeze(b);

  for (PartyId i : state_.credible) {
    evaluation::append_credibility_csv(state_.credibility_csv, 0, state_.parties[i].credibility);
  }
  economy::append_balances_csv(state_.balances_csv, 0, state_.book);
  state_.benchmarked = true;
  check_balances(0);
  return make_report(0, std::move(banned));
}

RoundReport Federation::run_round(std::uint64_t round) {
  require(state_.benchmarked, ErrorCode::kProtocol, "run benchmarking before collaborative rounds");
  require(state_.credible.size() >= 2, ErrorCode::kProtocol, "fewer than two credible parties");
  State snapshot = state_;
  std::vector<PartyId> banned;
  try {
    run_round_unchecked(round, banned);
  } catch (...) {
    state_ = std::move(snapshot);
    throw;
  }
  return make_report(round, std::move(banned));
}

void Federation::run_round_unchecked(std::uint64_t round, std::vector<PartyId>& banned) {
  state_.book.begin_round();
  const std::vector<PartyId> credible = state_.credible;
  const Eigen::Index dim = static_cast<Eigen::Index>(param_count_);

  // Step 1: local training on the round-start parameters.
  std::map<PartyId, Eigen::VectorXd> delta;
  for (PartyId i : credible) {
    PartyState& p = state_.parties[i];
    delta[i] = p.honest ? learner::train_local(p.model, *p.shard, config_.sgd, p.sgd, p.shuffle_rng)
                        : Eigen::VectorXd::Zero(dim);
  }

  // Step 1 continued: budgets, per-peer allocations and DOWNLOAD requests.
  struct Request {
    PartyId requester;
    PartyId target;
    std::uint64_t count;
    std::uint64_t id;
    Digest commitment{};
  };
  std::vector<Request> requests;
  std::vector<PartyId> requesters;
  std::vector<ledger::Transaction> downloads;
  std::uint64_t next_id = state_.chain.next_request_id();
  for (PartyId i : credible) {
    const PartyState& p = state_.parties[i];
    const std::uint64_t budget = economy::set_budget(state_.book.balance(i));
    std::vector<Request> mine;
    std::uint64_t total = 0;
    for (PartyId j : credible) {
      if (j == i) continue;
      const std::uint64_t count = economy::allocate(p.credibility.score(j), budget,
                                                    state_.parties[j].lambda, param_count_);
      mine.push_back({i, j, count, 0});
      total += count;
    }
    if (total == 0) continue;
    requesters.push_back(i);
    for (Request& q : mine) {
      q.id = next_id++;
      downloads.push_back(ledger::Transaction::make_signed(
          i, ledger::DownloadBody{round, q.id, q.target, q.count, p.keys->recipient.public_key},
          p.keys->signing.secret_key));
      requests.push_back(q);
    }
  }
  if (!downloads.empty()) state_.chain.append_block(ledger::BlockKind::kOperation, std::move(downloads));

  // Step 2: pads per aggregation, masking, layer-1 encryption, onion wrap.
  std::map<PartyId, std::map<PartyId, crypto::Keystream>> pads;
  if (config_.encryption) {
    const std::uint64_t digest = crypto::credible_set_digest(credible);
    for (PartyId i : requesters) {
      const crypto::MessageId message{round, i};
      require(state_.used_messages.insert({message, digest}).second, ErrorCode::kProtocol,
              "keystream reuse for round " + std::to_string(round));
      for (crypto::Keystream& k : dealer_.deal(credible, message, param_count_, codec_)) {
        pads[i].emplace(k.party, std::move(k));
      }
    }
  }
  ledger::PayloadStore store;
  std::vector<ledger::Transaction> uploads;
  for (Request& q : requests) {
    PartyState& uploader = state_.parties[q.target];
    const learner::MaskedGradient masked = learner::select_largest(delta[q.target], q.count);
    std::vector<crypto::Word> words = codec_.encode_vector(
        std::span<const double>(masked.values.data(), param_count_), config_.clip);
    Bytes payload;
    if (config_.encryption) {
      const crypto::CipherVector cv =
          crypto::encrypt_vector(words, pads.at(q.requester).at(q.target), codec_);
      payload = crypto::onion_wrap(crypto::serialize(cv),
                                   state_.parties[q.requester].keys->recipient.public_key,
                                   uploader.onion_rng)
                    .serialize();
    } else {
      payload = crypto::serialize(crypto::CipherVector{round, q.target, std::move(words)});
    }
    q.commitment = store.put(std::move(payload));
    uploads.push_back(ledger::Transaction::make_signed(
        q.target, ledger::UploadBody{q.id, q.commitment}, uploader.keys->signing.secret_key));
  }
  if (!uploads.empty()) {
    state_.chain.append_block(ledger::BlockKind::kOperation, std::move(uploads));
    for (const Request& q : requests) state_.book.transfer(q.requester, q.target, q.count);
  }
  if (fail_next_round_) {
    fail_next_round_ = false;
    fail(ErrorCode::kProtocol, "injected round failure");
  }

  // Step 3: every upload is committed; requesters decrypt and update.
  for (PartyId i : requesters) {
    PartyState& p = state_.parties[i];
    Eigen::VectorXd peer_sum = Eigen::VectorXd::Zero(dim);
    std::vector<crypto::CipherVector> ciphers;
    for (const Request& q : requests) {
      if (q.requester != i) continue;
      const Bytes& payload = store.get(q.commitment);
      require(crypto::sha256(payload) == q.commitment, ErrorCode::kProtocol,
              "payload does not match its commitment");
      crypto::CipherVector cv = config_.encryption
                                    ? crypto::onion_unwrap(payload, p.keys->recipient.secret_key)
                                    : crypto::parse_cipher_vector(payload);
      require(cv.round_id == round, ErrorCode::kRoundMismatch, "stale gradient payload");
      require(cv.sender == q.target, ErrorCode::kProtocol, "payload sender mismatch");
      require(cv.dim() == param_count_, ErrorCode::kDimensionMismatch, "payload dimension mismatch");
      if (config_.encryption) {
        ciphers.push_back(std::move(cv));
      } else {
        const std::vector<double> plain = codec_.decode_vector(cv.ciphertexts);
        peer_sum += Eigen::Map<const Eigen::VectorXd>(plain.data(), dim);
      }
    }
    if (config_.encryption) {
      const std::vector<crypto::Word> sum = crypto::aggr_dec(ciphers, pads.at(i).at(i), codec_);
      const std::vector<double> plain = codec_.decode_vector(sum);
      peer_sum = Eigen::Map<const Eigen::VectorXd>(plain.data(), dim);
    }
    learner::apply_update(p.model, peer_sum);
  }

  for (PartyId i : credible) {
    PartyState& p = state_.parties[i];
    p.last_acc = accuracy(p.model);
    p.best_acc = std::max(p.best_acc, p.last_acc);
  }

  // Steps 4-6: mutual evaluation, credibility blend, reports and bans.
  const auto fresh = fresh_scores(round);
  for (PartyId i : credible) {
    evaluation::CredibilityLedger f{i, fresh.at(i), false};
    f.normalize();
    state_.parties[i].credibility = evaluation::update_credibility(state_.parties[i].credibility, f.scores);
  }
  std::vector<ledger::Transaction> votes;
  banned = ban_passes(round, votes);
  if (!votes.empty()) state_.chain.append_block(ledger::BlockKind::kOperation, std::move(votes));
  for (PartyId b : banned) state_.book.freeze(b);

  for (PartyId i : state_.credible) {
    evaluation::append_credibility_csv(state_.credibility_csv, round, state_.parties[i].credibility);
  }
  economy::append_balances_csv(state_.balances_csv, round, state_.book);
  check_balances(round);
}

void Federation::check_balances(std::uint64_t round) const {
  const ledger::LedgerState& chain = state_.chain.state();
  const std::string at = " after round " + std::to_string(round);
  for (const PartyState& p : state_.parties) {
    const ledger::PartyRecord& rec = chain.party(p.id);
    require(rec.balance == state_.book.balance(p.id) && rec.pending == 0, ErrorCode::kProtocol,
            "chain and economy disagree on party " + std::to_string(p.id) + at);
    require(rec.banned == !p.alive, ErrorCode::kProtocol, "ban state diverged" + at);
  }
  require(chain.minted_total() == state_.book.genesis_total(), ErrorCode::kProtocol,
          "minted points diverged" + at);
  require(chain.live_total() + chain.frozen_total() == chain.minted_total(), ErrorCode::kProtocol,
          "points not conserved" + at);
  require(state_.book.live_total() + state_.book.frozen_total() == state_.book.genesis_total(),
          ErrorCode::kProtocol, "economy totals not conserved" + at);
}

RoundReport Federation::make_report(std::uint64_t round, std::vector<PartyId> banned) const {
  RoundReport r;
  r.round = round;
  r.banned = std::move(banned);
  r.credible_count = state_.credible.size();
  r.ledger_height = state_.chain.empty() ? 0 : state_.chain.state().next_height() - 1;
  r.minted_total = state_.chain.state().minted_total();
  r.live_total = state_.chain.state().live_total();
  r.frozen_total = state_.chain.state().frozen_total();
  for (const PartyState& p : state_.parties) {
    r.parties.push_back({p.id, p.alive, p.last_acc, p.best_acc, state_.book.balance(p.id)});
  }
  return r;
}

}  // namespace fppdl::protocol
