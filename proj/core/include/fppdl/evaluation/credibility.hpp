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
#include <span>
#include <string>
#include <vector>

#include "fppdl/common/random.hpp"
#include "fppdl/common/types.hpp"
#include "fppdl/learner/dataset.hpp"

namespace fppdl::evaluation {

using learner::RowMatrix;

// Source of unlabeled artificial samples a party releases for mutual
// evaluation. Implementations must be deterministic given the Rng state.
class SamplePublisher {
 public:
  virtual ~SamplePublisher() = default;
  virtual std::size_t pool_size() const = 0;
  virtual std::size_t dim() const = 0;
  virtual RowMatrix publish(std::size_t count, Rng& rng) const = 0;
};

// Draws `count` distinct training points and adds N(0, noise_scale^2) to
// every feature. This is a stand-in for a generative model and offers no
// differential privacy.
class NoisySubsamplePublisher final : public SamplePublisher {
 public:
  NoisySubsamplePublisher(RowMatrix pool, double noise_scale);
  std::size_t pool_size() const override { return static_cast<std::size_t>(pool_.rows()); }
  std::size_t dim() const override { return static_cast<std::size_t>(pool_.cols()); }
  RowMatrix publish(std::size_t count, Rng& rng) const override;

 private:
  RowMatrix pool_;
  double noise_scale_;
};

// Pure N(0, scale^2) noise with a nominal pool size; used by the free rider.
class GaussianNoisePublisher final : public SamplePublisher {
 public:
  GaussianNoisePublisher(std::size_t nominal_pool, std::size_t dim, double scale = 1.0);
  std::size_t pool_size() const override { return pool_; }
  std::size_t dim() const override { return dim_; }
  RowMatrix publish(std::size_t count, Rng& rng) const override;

 private:
  std::size_t pool_;
  std::size_t dim_;
  double scale_;
};

// Predicted labels for one publisher's batch: one row per sample, one column
// per credible party (publisher included).
struct LabelMatrix {
  std::vector<PartyId> columns;
  std::size_t rows = 0;
  std::vector<int> entries;  // row-major

  LabelMatrix() = default;
  LabelMatrix(std::vector<PartyId> parties, std::size_t row_count);
  int at(std::size_t row, std::size_t col) const { return entries[row * columns.size() + col]; }
  void set_column(std::size_t col, std::span<const int> labels);
  std::size_t column_of(PartyId party) const;
};

// Modal label per row; ties go to the smallest label.
std::vector<int> majority_vote(const LabelMatrix& matrix);

// m_j / u for every column except `owner`.
std::map<PartyId, double> raw_scores(const LabelMatrix& matrix, PartyId owner);

struct CredibilityLedger {
  PartyId owner = 0;
  std::map<PartyId, double> scores;
  bool normalized = false;

  double sum() const;
  // Scales scores to sum to 1. An all-zero list becomes uniform.
  void normalize();
  // Drops a banned peer and renormalizes.
  void remove(PartyId peer);
  double score(PartyId peer) const;
};

// Raw agreement ratios from the label matrix, normalized over peers.
CredibilityLedger init_credibility(PartyId owner, const LabelMatrix& matrix, std::size_t u);

// 0.2 old + 0.8 fresh per peer, then renormalized.
CredibilityLedger update_credibility(const CredibilityLedger& old,
                                     const std::map<PartyId, double>& fresh);

inline constexpr double kHistoryWeight = 0.2;

// 2 / (3 (|C| - 1)).
double compute_cth(std::size_t credible_count);

// Peers whose normalized score is strictly below `threshold`.
std::vector<PartyId> flag_low_contribution(const CredibilityLedger& ledger, double threshold);

struct BanOutcome {
  std::vector<PartyId> remaining;
  std::vector<PartyId> banned;
};

// One voting pass: a party is removed when a strict majority of the other
// credible parties flagged it. Reports from outside the set are ignored.
BanOutcome collect_reports_and_ban(const std::map<PartyId, std::vector<PartyId>>& reports,
                                   std::span<const PartyId> credible_set);

// "round,owner,peer,score" rows for one ledger.
void append_credibility_csv(std::string& out, std::uint64_t round,
                            const CredibilityLedger& ledger);

// Published batch as an f64 IDX fragment shaped count x rows x cols.
Bytes export_samples_idx(const RowMatrix& samples, std::uint32_t rows, std::uint32_t cols);

}  // namespace fppdl::evaluation
