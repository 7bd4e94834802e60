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
#include <string>

#include "fppdl/common/types.hpp"

namespace fppdl::economy {

// floor(x), except values within 1e-9 (relative) of an integer snap to it so
// that products such as 0.29 * 100 do not lose a point to representation
// error.
std::uint64_t floor_points(double x);

// floor(lambda * |w| * (n - 1)).
std::uint64_t init_points(double lambda, std::size_t param_count, std::size_t n);

// d_i = p_i.
inline std::uint64_t set_budget(std::uint64_t balance) { return balance; }

// floor(min(c * d, lambda_j * |w|)).
std::uint64_t allocate(double credibility, std::uint64_t budget, double lambda_j,
                       std::size_t param_count);

struct PointsAccount {
  std::uint64_t balance = 0;
  std::uint64_t earned = 0;  // this round
  std::uint64_t spent = 0;   // this round
  bool frozen = false;
};

// Orchestrator-side mirror of the balances the chain derives.
class PointsBook {
 public:
  void open(PartyId party, std::uint64_t points);
  void transfer(PartyId requester, PartyId uploader, std::uint64_t amount);
  // Removes a banned party's balance from circulation.
  void freeze(PartyId party);
  void begin_round();

  const PointsAccount& account(PartyId party) const;
  std::uint64_t balance(PartyId party) const { return account(party).balance; }
  const std::map<PartyId, PointsAccount>& accounts() const { return accounts_; }

  std::uint64_t genesis_total() const { return genesis_total_; }
  std::uint64_t frozen_total() const { return frozen_total_; }
  std::uint64_t live_total() const;

 private:
  PointsAccount& mutable_account(PartyId party);

  std::map<PartyId, PointsAccount> accounts_;
  std::uint64_t genesis_total_ = 0;
  std::uint64_t frozen_total_ = 0;
};

// "round,party,balance,earned,spent" rows, one per account.
void append_balances_csv(std::string& out, std::uint64_t round, const PointsBook& book);

}  // namespace fppdl::economy
