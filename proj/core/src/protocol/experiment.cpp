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

#include "fppdl/protocol/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include <nlohmann/json.hpp>

#include "fppdl/common/error.hpp"
#include "fppdl/common/io.hpp"
#include "fppdl/ledger/log.hpp"

namespace fppdl::protocol {
namespace {

using learner::Mlp;

constexpr std::uint64_t kCentralSlot = 2'000'000;

std::vector<std::size_t> architecture(const ExperimentConfig& c, std::size_t input_dim) {
  std::vector<std::size_t> arch = {input_dim};
  arch.insert(arch.end(), c.hidden.begin(), c.hidden.end());
  arch.push_back(10);
  return arch;
}

Mlp initial_model(const ExperimentConfig& c, std::size_t input_dim) {
  Mlp m(architecture(c, input_dim));
  Rng init = make_rng(c.seeds.model, {tag(Stream::kModelInit)});
  m.init_glorot(init);
  return m;
}

const learner::Dataset& test_view(const ExperimentConfig& c, const learner::DataSource& data,
                                  std::optional<learner::Dataset>& storage) {
  if (c.test_limit == 0 || c.test_limit >= data.test().size()) return data.test();
  std::vector<std::size_t> idx(c.test_limit);
  std::iota(idx.begin(), idx.end(), 0);
  storage = data.test().subset(idx);
  return *storage;
}

// Honest parties of a baseline run, pre-trained exactly as in the FPPDL run so
// their standalone accuracies coincide.
struct LocalParty {
  PartyId id;
  bool honest;
  double lambda;
  learner::Dataset shard;
  Mlp model;
  learner::SgdState sgd;
  Rng rng;
  double sacc = 0;
  double last = 0;
  double best = 0;
};

std::vector<LocalParty> pretrained_parties(const ExperimentConfig& c,
                                           const learner::DataSource& data,
                                           const learner::Dataset& test) {
  const auto shards = plan_shards(c, data.train_size());
  const auto lambdas = sharing_levels(c);
  const Mlp w0 = initial_model(c, test.dim());
  learner::SgdConfig pre = c.sgd;
  pre.epochs = c.pretrain_epochs;
  std::vector<LocalParty> out;
  std::size_t ordinal = 0;
  for (std::size_t id = 0; id < c.parties; ++id) {
    const bool honest = !(c.free_rider && *c.free_rider == id);
    const std::uint64_t slot = honest ? ordinal : 1'000'000 + id;
    LocalParty p{static_cast<PartyId>(id), honest, lambdas[id],
                 honest ? data.train_subset(shards[ordinal]) : learner::Dataset{},
                 w0, {}, make_rng(c.seeds.sampling, {tag(Stream::kShuffle), slot})};
    if (honest) ++ordinal;
    if (p.honest && c.pretrain_epochs > 0) learner::train_local(p.model, p.shard, pre, p.sgd, p.rng);
    p.sacc = p.last = p.best = learner::evaluate(p.model, test);
    out.push_back(std::move(p));
  }
  return out;
}

RoundReport local_report(std::uint64_t round, const std::vector<LocalParty>& parties) {
  RoundReport r;
  r.round = round;
  r.credible_count = parties.size();
  for (const LocalParty& p : parties) r.parties.push_back({p.id, true, p.last, p.best, 0});
  return r;
}

void summarize_local(ExperimentResult& res, const std::vector<LocalParty>& parties) {
  for (const LocalParty& p : parties) {
    res.parties.push_back({p.id, p.honest, true, p.lambda, p.shard.size(), p.sacc, p.best, p.last,
                           std::nullopt});
    res.final_params.push_back(p.model.params());
  }
}

void fairness_over(ExperimentResult& res, const std::vector<PartySummary>& parties) {
  std::vector<PartyId> ids;
  std::vector<double> lambdas, sacc, best;
  for (const PartySummary& p : parties) {
    if (!p.alive) continue;
    ids.push_back(p.id);
    lambdas.push_back(p.lambda);
    sacc.push_back(p.standalone_acc);
    best.push_back(p.best_acc);
  }
  res.fairness = metrics::make_fairness_report(res.config.setting, ids, lambdas, sacc, best);
}

ExperimentResult run_fppdl(const ExperimentConfig& c, const learner::DataSource& data,
                           const ProgressFn& progress) {
  ExperimentResult res;
  res.config = c;
  Federation fed(c, data);
  res.rounds.push_back(fed.run_benchmarking());
  if (progress) progress(res.rounds.back());
  for (std::uint64_t r = 1; r <= c.rounds; ++r) {
    if (fed.credible_set().size() < 2) {
      res.stopped_after_round = r - 1;
      break;
    }
    res.rounds.push_back(fed.run_round(r));
    if (progress) progress(res.rounds.back());
  }
  for (const PartyState& p : fed.parties()) {
    res.parties.push_back({p.id, p.honest, p.alive, p.lambda, p.nominal_size, p.standalone_acc,
                           p.best_acc, p.last_acc, p.banned_round});
    res.final_params.push_back(p.model.params());
  }
  res.chain = fed.chain().blocks();
  res.credibility_csv = fed.credibility_csv();
  res.balances_csv = fed.balances_csv();
  fairness_over(res, res.parties);
  return res;
}

ExperimentResult run_standalone(const ExperimentConfig& c, const learner::DataSource& data,
                                const ProgressFn& progress) {
  ExperimentResult res;
  res.config = c;
  std::optional<learner::Dataset> storage;
  const learner::Dataset& test = test_view(c, data, storage);
  std::vector<LocalParty> parties = pretrained_parties(c, data, test);
  res.rounds.push_back(local_report(0, parties));
  if (progress) progress(res.rounds.back());
  for (std::uint64_t r = 1; r <= c.rounds; ++r) {
    for (LocalParty& p : parties) {
      if (!p.honest) continue;
      learner::train_local(p.model, p.shard, c.sgd, p.sgd, p.rng);
      p.last = learner::evaluate(p.model, test);
      p.best = std::max(p.best, p.last);
    }
    res.rounds.push_back(local_report(r, parties));
    if (progress) progress(res.rounds.back());
  }
  summarize_local(res, parties);
  return res;
}

ExperimentResult run_centralized(const ExperimentConfig& c, const learner::DataSource& data,
                                 const ProgressFn& progress) {
  ExperimentResult res;
  res.config = c;
  std::optional<learner::Dataset> storage;
  const learner::Dataset& test = test_view(c, data, storage);
  std::vector<std::size_t> pooled;
  for (const auto& s : plan_shards(c, data.train_size())) pooled.insert(pooled.end(), s.begin(), s.end());
  LocalParty p{0, true, 1.0, data.train_subset(pooled), initial_model(c, test.dim()), {},
               make_rng(c.seeds.sampling, {tag(Stream::kShuffle), kCentralSlot})};
  learner::SgdConfig pre = c.sgd;
  pre.epochs = c.pretrain_epochs;
  if (c.pretrain_epochs > 0) learner::train_local(p.model, p.shard, pre, p.sgd, p.rng);
  p.sacc = p.last = p.best = learner::evaluate(p.model, test);
  std::vector<LocalParty> one;
  one.push_back(std::move(p));
  res.rounds.push_back(local_report(0, one));
  if (progress) progress(res.rounds.back());
  for (std::uint64_t r = 1; r <= c.rounds; ++r) {
    LocalParty& q = one.front();
    learner::train_local(q.model, q.shard, c.sgd, q.sgd, q.rng);
    q.last = learner::evaluate(q.model, test);
    q.best = std::max(q.best, q.last);
    res.rounds.push_back(local_report(r, one));
    if (progress) progress(res.rounds.back());
  }
  summarize_local(res, one);
  return res;
}

// Distributed selective SGD: round-robin over a parameter server, each party
// downloads the full server vector, trains, and uploads its dssgd_upload
// largest-magnitude deltas.
ExperimentResult run_dssgd(const ExperimentConfig& c, const learner::DataSource& data,
                           const ProgressFn& progress) {
  ExperimentResult res;
  res.config = c;
  std::optional<learner::Dataset> storage;
  const learner::Dataset& test = test_view(c, data, storage);
  std::vector<LocalParty> parties = pretrained_parties(c, data, test);
  Eigen::VectorXd server = initial_model(c, test.dim()).params();
  const auto upload = economy::floor_points(c.dssgd_upload * static_cast<double>(server.size()));
  res.rounds.push_back(local_report(0, parties));
  if (progress) progress(res.rounds.back());
  for (std::uint64_t r = 1; r <= c.rounds; ++r) {
    for (LocalParty& p : parties) {
      p.model.set_params(server);
      if (p.honest) {
        const Eigen::VectorXd delta = learner::train_local(p.model, p.shard, c.sgd, p.sgd, p.rng);
        server += learner::select_largest(delta, upload).values;
      }
      p.last = learner::evaluate(p.model, test);
      p.best = std::max(p.best, p.last);
    }
    res.rounds.push_back(local_report(r, parties));
    if (progress) progress(res.rounds.back());
  }
  summarize_local(res, parties);
  fairness_over(res, res.parties);
  return res;
}

}  // namespace

double ExperimentResult::best_accuracy() const {
  double best = 0;
  for (const PartySummary& p : parties) {
    if (p.honest && p.alive) best = std::max(best, p.best_acc);
  }
  return best;
}

std::string ExperimentResult::rounds_csv() const {
  std::string out =
      "round,party,alive,accuracy,best_accuracy,balance,credible_count,ledger_height\n";
  char buf[192];
  for (const RoundReport& r : rounds) {
    for (const PartyRound& p : r.parties) {
      std::snprintf(buf, sizeof buf, "%llu,%u,%d,%.6f,%.6f,%llu,%zu,%llu\n",
                    static_cast<unsigned long long>(r.round), p.id, p.alive ? 1 : 0, p.accuracy,
                    p.best_accuracy, static_cast<unsigned long long>(p.balance), r.credible_count,
                    static_cast<unsigned long long>(r.ledger_height));
      out += buf;
    }
  }
  return out;
}

std::string ExperimentResult::summary_json() const {
  nlohmann::ordered_json j;
  j["mode"] = std::string(to_string(config.mode));
  j["setting"] = config.setting;
  j["seeds"] = {{"data", config.seeds.data},
                {"model", config.seeds.model},
                {"sampling", config.seeds.sampling}};
  j["rounds"] = rounds.empty() ? 0 : rounds.back().round;
  j["best_accuracy"] = best_accuracy();
  auto& list = j["parties"];
  list = nlohmann::ordered_json::array();
  for (const PartySummary& p : parties) {
    nlohmann::ordered_json e;
    e["id"] = p.id;
    e["honest"] = p.honest;
    e["alive"] = p.alive;
    e["lambda"] = p.lambda;
    e["shard_size"] = p.shard_size;
    e["standalone_accuracy"] = p.standalone_acc;
    e["best_accuracy"] = p.best_acc;
    e["final_accuracy"] = p.final_acc;
    e["banned_round"] = p.banned_round ? nlohmann::ordered_json(*p.banned_round)
                                       : nlohmann::ordered_json(nullptr);
    list.push_back(std::move(e));
  }
  if (fairness && !fairness->degenerate) {
    j["r_xy"] = fairness->r_xy;
  } else {
    j["r_xy"] = nullptr;
  }
  return j.dump(2) + "\n";
}

ExperimentResult run_experiment(const ExperimentConfig& config, const learner::DataSource& data,
                                const ProgressFn& progress) {
  config.validate();
  switch (config.mode) {
    case Mode::kFppdl:
      return run_fppdl(config, data, progress);
    case Mode::kStandalone:
      return run_standalone(config, data, progress);
    case Mode::kCentralized:
      return run_centralized(config, data, progress);
    case Mode::kDssgd:
      return run_dssgd(config, data, progress);
  }
  fail(ErrorCode::kConfig, "unknown mode");
}

void write_artifacts(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  require(!ec, ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
  write_file_atomic(dir / "config.json", result.config.to_json());
  write_file_atomic(dir / "rounds.csv", result.rounds_csv());
  write_file_atomic(dir / "summary.json", result.summary_json());
  if (result.fairness) write_file_atomic(dir / "fairness.json", result.fairness->to_json());
  if (result.config.mode == Mode::kFppdl) {
    write_file_atomic(dir / "balances.csv", "round,party,balance,earned,spent\n" + result.balances_csv);
    write_file_atomic(dir / "credibility.csv", "round,owner,peer,score\n" + result.credibility_csv);
    ledger::write_log(dir / "chain.log", result.chain);
  }
}

}  // namespace fppdl::protocol
