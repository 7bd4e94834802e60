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

#include "fppdl/evaluation/credibility.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>

#include "fppdl/common/error.hpp"

namespace fppdl::evaluation {

NoisySubsamplePublisher::NoisySubsamplePublisher(RowMatrix pool, double noise_scale)
    : pool_(std::move(pool)), noise_scale_(noise_scale) {
  require(noise_scale_ >= 0, ErrorCode::kInvalidArgument, "noise scale must be non-negative");
}

RowMatrix NoisySubsamplePublisher::publish(std::size_t count, Rng& rng) const {
  require(count <= pool_size(), ErrorCode::kOutOfRange,
          "cannot publish " + std::to_string(count) + " samples from a pool of " +
              std::to_string(pool_size()));
  std::vector<std::size_t> idx(pool_size());
  std::iota(idx.begin(), idx.end(), 0);
  // Partial Fisher-Yates: the first `count` entries are a uniform draw.
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  RowMatrix out(static_cast<Eigen::Index>(count), pool_.cols());
  std::normal_distribution<double> noise(0.0, 1.0);
  for (std::size_t k = 0; k < count; ++k) {
    out.row(static_cast<Eigen::Index>(k)) = pool_.row(static_cast<Eigen::Index>(idx[k]));
    if (noise_scale_ > 0) {
      for (Eigen::Index c = 0; c < out.cols(); ++c) {
        out(static_cast<Eigen::Index>(k), c) += noise_scale_ * noise(rng);
      }
    }
  }
  return out;
}

GaussianNoisePublisher::GaussianNoisePublisher(std::size_t nominal_pool, std::size_t dim,
                                               double scale)
    : pool_(nominal_pool), dim_(dim), scale_(scale) {}

RowMatrix GaussianNoisePublisher::publish(std::size_t count, Rng& rng) const {
  require(count <= pool_, ErrorCode::kOutOfRange, "publish count exceeds the nominal pool");
  RowMatrix out(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(dim_));
  std::normal_distribution<double> noise(0.0, scale_);
  for (Eigen::Index i = 0; i < out.size(); ++i) out.data()[i] = noise(rng);
  return out;
}

LabelMatrix::LabelMatrix(std::vector<PartyId> parties, std::size_t row_count)
    : columns(std::move(parties)), rows(row_count), entries(rows * columns.size(), 0) {}

void LabelMatrix::set_column(std::size_t col, std::span<const int> labels) {
  require(col < columns.size(), ErrorCode::kOutOfRange, "label column out of range");
  require(labels.size() == rows, ErrorCode::kDimensionMismatch, "label column length mismatch");
  for (std::size_t r = 0; r < rows; ++r) entries[r * columns.size() + col] = labels[r];
}

std::size_t LabelMatrix::column_of(PartyId party) const {
  auto it = std::find(columns.begin(), columns.end(), party);
  require(it != columns.end(), ErrorCode::kUnknownParty, "party has no label column");
  return static_cast<std::size_t>(it - columns.begin());
}

std::vector<int> majority_vote(const LabelMatrix& m) {
  require(!m.columns.empty() && m.rows > 0, ErrorCode::kEmpty, "empty label matrix");
  std::vector<int> out(m.rows);
  std::map<int, std::size_t> counts;
  for (std::size_t r = 0; r < m.rows; ++r) {
    counts.clear();
    for (std::size_t c = 0; c < m.columns.size(); ++c) ++counts[m.at(r, c)];
    // std::map iterates labels in ascending order, so the strict > keeps
    // the smallest label among ties.
    int best = 0;
    std::size_t best_count = 0;
    for (const auto& [label, n] : counts) {
      if (n > best_count) {
        best = label;
        best_count = n;
      }
    }
    out[r] = best;
  }
  return out;
}

std::map<PartyId, double> raw_scores(const LabelMatrix& m, PartyId owner) {
  const std::vector<int> vote = majority_vote(m);
  std::map<PartyId, double> out;
  for (std::size_t c = 0; c < m.columns.size(); ++c) {
    if (m.columns[c] == owner) continue;
    std::size_t matches = 0;
    for (std::size_t r = 0; r < m.rows; ++r) matches += m.at(r, c) == vote[r];
    out[m.columns[c]] = static_cast<double>(matches) / static_cast<double>(m.rows);
  }
  return out;
}

double CredibilityLedger::sum() const {
  double s = 0;
  for (const auto& [peer, v] : scores) s += v;
  return s;
}

void CredibilityLedger::normalize() {
  const double s = sum();
  for (auto& [peer, v] : scores) {
    v = s > 0 ? v / s : 1.0 / static_cast<double>(scores.size());
  }
  normalized = true;
}

void CredibilityLedger::remove(PartyId peer) {
  scores.erase(peer);
  if (!scores.empty()) normalize();
}

double CredibilityLedger::score(PartyId peer) const {
  auto it = scores.find(peer);
  require(it != scores.end(), ErrorCode::kUnknownParty, "peer not in credibility list");
  return it->second;
}

CredibilityLedger init_credibility(PartyId owner, const LabelMatrix& matrix, std::size_t u) {
  require(matrix.rows == u, ErrorCode::kDimensionMismatch,
          "label matrix rows differ from the published count");
  CredibilityLedger ledger;
  ledger.owner = owner;
  ledger.scores = raw_scores(matrix, owner);
  ledger.normalize();
  return ledger;
}

CredibilityLedger update_credibility(const CredibilityLedger& old,
                                     const std::map<PartyId, double>& fresh) {
  require(fresh.size() == old.scores.size(), ErrorCode::kInvalidArgument, "peer set mismatch");
  CredibilityLedger out;
  out.owner = old.owner;
  for (const auto& [peer, v] : old.scores) {
    auto it = fresh.find(peer);
    require(it != fresh.end(), ErrorCode::kInvalidArgument, "peer set mismatch");
    out.scores[peer] = kHistoryWeight * v + (1.0 - kHistoryWeight) * it->second;
  }
  out.normalize();
  return out;
}

double compute_cth(std::size_t credible_count) {
  require(credible_count >= 2, ErrorCode::kInvalidArgument, "threshold needs at least two parties");
  return 2.0 / (3.0 * static_cast<double>(credible_count - 1));
}

std::vector<PartyId> flag_low_contribution(const CredibilityLedger& ledger, double threshold) {
  std::vector<PartyId> out;
  for (const auto& [peer, v] : ledger.scores) {
    if (v < threshold) out.push_back(peer);
  }
  return out;
}

BanOutcome collect_reports_and_ban(const std::map<PartyId, std::vector<PartyId>>& reports,
                                   std::span<const PartyId> credible_set) {
  const std::set<PartyId> live(credible_set.begin(), credible_set.end());
  std::map<PartyId, std::size_t> votes;
  for (const auto& [reporter, flagged] : reports) {
    if (!live.contains(reporter)) continue;
    for (PartyId target : std::set<PartyId>(flagged.begin(), flagged.end())) {
      if (target != reporter && live.contains(target)) ++votes[target];
    }
  }
  BanOutcome out;
  const std::size_t others = live.size() - 1;
  for (PartyId p : live) {
    const auto it = votes.find(p);
    if (it != votes.end() && 2 * it->second > others) {
      out.banned.push_back(p);
    } else {
      out.remaining.push_back(p);
    }
  }
  return out;
}

void append_credibility_csv(std::string& out, std::uint64_t round,
                            const CredibilityLedger& ledger) {
  char buf[96];
  for (const auto& [peer, v] : ledger.scores) {
    std::snprintf(buf, sizeof buf, "%llu,%u,%u,%.17g\n", static_cast<unsigned long long>(round),
                  ledger.owner, peer, v);
    out += buf;
  }
}

Bytes export_samples_idx(const RowMatrix& samples, std::uint32_t rows, std::uint32_t cols) {
  return learner::serialize_idx(learner::idx_from_matrix(samples, rows, cols));
}

}  // namespace fppdl::evaluation
