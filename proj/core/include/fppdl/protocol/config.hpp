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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fppdl/learner/train.hpp"

namespace fppdl::protocol {

enum class Mode { kFppdl, kStandalone, kCentralized, kDssgd };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

struct Seeds {
  std::uint64_t data = 1;      // shard split, sharing levels
  std::uint64_t model = 2;     // w_0
  std::uint64_t sampling = 3;  // shuffles, published samples, keys, pads
  friend bool operator==(const Seeds&, const Seeds&) = default;
};

struct ExperimentConfig {
  Mode mode = Mode::kFppdl;
  int setting = 1;
  // Total party count, the free rider included.
  std::size_t parties = 4;
  // Settings 1 and 2: examples per honest party.
  std::size_t shard_size = 600;
  // Setting 3: examples split among the honest parties (0 = parties * shard_size).
  std::size_t total_examples = 0;
  std::size_t min_shard = 100;
  double lambda = 0.1;
  double lambda_min = 0.1;
  double lambda_max = 0.5;

  std::vector<std::size_t> hidden = {128};
  learner::SgdConfig sgd;
  std::size_t pretrain_epochs = 10;
  std::size_t rounds = 100;
  Seeds seeds;

  std::optional<std::size_t> free_rider;
  double noise_scale = 0.1;
  std::optional<double> cth;

  bool encryption = true;
  int scale_bits = 16;
  double clip = 32.0;
  double dssgd_upload = 0.1;

  // Evaluate on the first `test_limit` test examples (0 = all).
  std::size_t test_limit = 0;

  std::size_t honest_count() const { return parties - (free_rider ? 1 : 0); }
  std::size_t setting3_total() const {
    return total_examples ? total_examples : honest_count() * shard_size;
  }

  // Throws kConfig with the first problem found.
  void validate() const;

  std::string to_json() const;
  static ExperimentConfig from_json(std::string_view text);
  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&);
};

}  // namespace fppdl::protocol
