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

#include "fppdl/economy/points.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fppdl/common/error.hpp"

namespace fppdl::economy {

std::uint64_t floor_points(double x) {
  require(std::isfinite(x) && x >= 0, ErrorCode::kInvalidArgument,
          "point amounts must be finite and non-negative");
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, nearest)) {
    return static_cast<std::uint64_t>(nearest);
  }
  return static_cast<std::uint64_t>(std::floor(x));
}

std::uint64_t init_points(double lambda, std::size_t param_count, std::size_t n) {
  require(lambda > 0 && lambda <= 1, ErrorCode::kInvalidArgument, "sharing level outside (0, 1]");
  require(n >= 2, ErrorCode::kInvalidArgument, "points need at least two parties");
  return floor_points(lambda * static_cast<double>(param_count) * static_cast<double>(n - 1));
}

std::uint64_t allocate(double credibility, std::uint64_t budget, double lambda_j,
                       std::size_t param_count) {
  require(credibility >= 0 && credibility <= 1 + 1e-9, ErrorCode::kInvalidArgument,
          "credibility outside [0, 1]");
  require(lambda_j > 0 && lambda_j <= 1, ErrorCode::kInvalidArgument, "sharing level outside (0, 1]");
  const double wanted = credibility * static_cast<double>(budget);
  const double cap = lambda_j * static_cast<double>(param_count);
  return floor_points(std::min(wanted, cap));
}

void PointsBook::open(PartyId party, std::uint64_t points) {
  require(!accounts_.contains(party), ErrorCode::kDuplicate, "account already open");
  accounts_[party].balance = points;
  genesis_total_ += points;
}

PointsAccount& PointsBook::mutable_account(PartyId party) {
  auto it = accounts_.find(party);
  require(it != accounts_.end(), ErrorCode::kUnknownParty,
          "no account for party " + std::to_string(party));
  return it->second;
}

const PointsAccount& PointsBook::account(PartyId party) const {
  auto it = accounts_.find(party);
  require(it != accounts_.end(), ErrorCode::kUnknownParty,
          "no account for party " + std::to_string(party));
  return it->second;
}

void PointsBook::transfer(PartyId requester, PartyId uploader, std::uint64_t amount) {
  PointsAccount& from = mutable_account(requester);
  PointsAccount& to = mutable_account(uploader);
  require(!from.frozen && !to.frozen, ErrorCode::kBannedParty, "transfer touches a frozen account");
  require(from.balance >= amount, ErrorCode::kInsufficientBalance,
          "party " + std::to_string(requester) + " cannot pay " + std::to_string(amount));
  from.balance -= amount;
  from.spent += amount;
  to.balance += amount;
  to.earned += amount;
}

void PointsBook::freeze(PartyId party) {
  PointsAccount& a = mutable_account(party);
  if (a.frozen) return;
  a.frozen = true;
  frozen_total_ += a.balance;
}

void PointsBook::begin_round() {
  for (auto& [id, a] : accounts_) a.earned = a.spent = 0;
}

std::uint64_t PointsBook::live_total() const {
  std::uint64_t total = 0;
  for (const auto& [id, a] : accounts_) {
    if (!a.frozen) total += a.balance;
  }
  return total;
}

void append_balances_csv(std::string& out, std::uint64_t round, const PointsBook& book) {
  char buf[128];
  for (const auto& [id, a] : book.accounts()) {
    std::snprintf(buf, sizeof buf, "%llu,%u,%llu,%llu,%llu\n",
                  static_cast<unsigned long long>(round), id,
                  static_cast<unsigned long long>(a.balance),
                  static_cast<unsigned long long>(a.earned),
                  static_cast<unsigned long long>(a.spent));
    out += buf;
  }
}

}  // namespace fppdl::economy
