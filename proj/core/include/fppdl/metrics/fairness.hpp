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

#include <span>
#include <string>
#include <vector>

#include "fppdl/common/types.hpp"

namespace fppdl::metrics {

// Setting 2 sums the normalized sharing levels and the normalized standalone
// accuracies; Settings 1 and 3 use the standalone accuracies as they are.
std::vector<double> contribution_axis(int setting, std::span<const double> lambdas,
                                      std::span<const double> standalone_acc);

// Sample Pearson correlation with n-1 standard deviations. Returns NaN when
// either input is constant.
double pearson(std::span<const double> x, std::span<const double> y);

struct FairnessReport {
  int setting = 1;
  std::vector<PartyId> parties;
  std::vector<double> x;
  std::vector<double> y;
  double r_xy = 0;
  bool degenerate = false;

  // Deterministic JSON: fixed key order, shortest round-trip number format.
  std::string to_json() const;
  static FairnessReport from_json(const std::string& text);
};

FairnessReport make_fairness_report(int setting, std::vector<PartyId> parties,
                                    std::span<const double> lambdas,
                                    std::span<const double> standalone_acc,
                                    std::vector<double> final_acc);

}  // namespace fppdl::metrics
