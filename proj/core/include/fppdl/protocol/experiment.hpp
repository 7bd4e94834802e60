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
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fppdl/learner/dataset.hpp"
#include "fppdl/ledger/block.hpp"
#include "fppdl/metrics/fairness.hpp"
#include "fppdl/protocol/config.hpp"
#include "fppdl/protocol/federation.hpp"

namespace fppdl::protocol {

struct PartySummary {
  PartyId id = 0;
  bool honest = true;
  bool alive = true;
  double lambda = 0;
  std::size_t shard_size = 0;
  double standalone_acc = 0;
  double best_acc = 0;
  double final_acc = 0;
  std::optional<std::uint64_t> banned_round;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<PartySummary> parties;
  // Round 0 is the state right after benchmarking (or pre-training).
  std::vector<RoundReport> rounds;
  std::optional<metrics::FairnessReport> fairness;
  std::vector<Eigen::VectorXd> final_params;  // by party id
  std::vector<ledger::Block> chain;
  std::string credibility_csv;
  std::string balances_csv;
  // Set when the credible set fell below two and the run stopped early.
  std::optional<std::uint64_t> stopped_after_round;

  // Best accuracy over surviving honest parties.
  double best_accuracy() const;
  std::string rounds_csv() const;
  std::string summary_json() const;
};

using ProgressFn = std::function<void(const RoundReport&)>;

ExperimentResult run_experiment(const ExperimentConfig& config, const learner::DataSource& data,
                                const ProgressFn& progress = {});

// Writes every artifact of the result's mode into `dir` (created if
// missing). Each file lands via write-then-rename.
void write_artifacts(const ExperimentResult& result, const std::filesystem::path& dir);

}  // namespace fppdl::protocol
