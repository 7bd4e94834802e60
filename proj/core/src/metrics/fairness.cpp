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

#include "fppdl/metrics/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "fppdl/common/error.hpp"

namespace fppdl::metrics {

std::vector<double> contribution_axis(int setting, std::span<const double> lambdas,
                                      std::span<const double> standalone_acc) {
  require(setting >= 1 && setting <= 3, ErrorCode::kInvalidArgument, "setting must be 1, 2 or 3");
  if (setting != 2) return {standalone_acc.begin(), standalone_acc.end()};
  require(lambdas.size() == standalone_acc.size(), ErrorCode::kDimensionMismatch,
          "sharing levels and accuracies differ in length");
  double sum_l = 0, sum_a = 0;
  for (double v : lambdas) sum_l += v;
  for (double v : standalone_acc) sum_a += v;
  require(sum_l > 0 && sum_a > 0, ErrorCode::kInvalidArgument, "cannot normalize a zero vector");
  std::vector<double> x(lambdas.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = lambdas[i] / sum_l + standalone_acc[i] / sum_a;
  return x;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), ErrorCode::kDimensionMismatch, "pearson inputs differ in length");
  require(x.size() >= 2, ErrorCode::kInvalidArgument, "pearson needs at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0 || syy <= 0) return std::numeric_limits<double>::quiet_NaN();
  const double sx = std::sqrt(sxx / (n - 1));
  const double sy = std::sqrt(syy / (n - 1));
  const double r = sxy / ((n - 1) * sx * sy);
  return std::clamp(r, -1.0, 1.0);
}

std::string FairnessReport::to_json() const {
  nlohmann::ordered_json j;
  j["setting"] = setting;
  j["parties"] = parties;
  j["x"] = x;
  j["y"] = y;
  if (degenerate) {
    j["r_xy"] = nullptr;
  } else {
    j["r_xy"] = r_xy;
  }
  j["degenerate"] = degenerate;
  return j.dump(2) + "\n";
}

FairnessReport FairnessReport::from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    FairnessReport r;
    r.setting = j.at("setting").get<int>();
    r.parties = j.at("parties").get<std::vector<PartyId>>();
    r.x = j.at("x").get<std::vector<double>>();
    r.y = j.at("y").get<std::vector<double>>();
    r.degenerate = j.value("degenerate", false);
    r.r_xy = j.at("r_xy").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                     : j.at("r_xy").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kMalformed, std::string("fairness report: ") + e.what());
  }
}

FairnessReport make_fairness_report(int setting, std::vector<PartyId> parties,
                                    std::span<const double> lambdas,
                                    std::span<const double> standalone_acc,
                                    std::vector<double> final_acc) {
  require(parties.size() == final_acc.size(), ErrorCode::kDimensionMismatch,
          "one accuracy per party expected");
  FairnessReport r;
  r.setting = setting;
  r.parties = std::move(parties);
  r.x = contribution_axis(setting, lambdas, standalone_acc);
  r.y = std::move(final_acc);
  require(r.x.size() == r.y.size(), ErrorCode::kDimensionMismatch, "axis lengths differ");
  if (r.x.size() < 2) {
    r.degenerate = true;
    r.r_xy = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  r.r_xy = pearson(r.x, r.y);
  r.degenerate = std::isnan(r.r_xy);
  return r;
}

}  // namespace fppdl::metrics
