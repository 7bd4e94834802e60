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
#include <vector>

#include <Eigen/Core>

#include "fppdl/common/random.hpp"
#include "fppdl/learner/dataset.hpp"
#include "fppdl/learner/model.hpp"

namespace fppdl::learner {

struct SgdConfig {
  std::size_t epochs = 1;
  std::size_t batch_size = 1;
  double learning_rate = 0.001;
  // Keras-style time decay: lr_t = lr / (1 + decay * t), t = steps taken so far.
  double decay = 1e-7;
};

// Per-party optimizer state that persists across rounds.
struct SgdState {
  std::uint64_t iterations = 0;
};

// Runs `epochs` of shuffled mini-batch SGD on `shard` and returns
// w_after - w_before. The model is left at w_after.
Eigen::VectorXd train_local(Mlp& model, const Dataset& shard, const SgdConfig& config,
                            SgdState& state, Rng& rng);

struct MaskedGradient {
  Eigen::VectorXd values;  // unselected coordinates are exactly 0
  std::vector<std::size_t> kept;  // selected coordinates, ascending
};

// Keeps the d entries of largest magnitude, ties going to the lower index.
MaskedGradient select_largest(const Eigen::VectorXd& grad, std::size_t d);

// w <- w + peer_sum. The model already carries its own delta from
// train_local, so this completes w_start + delta_own + peer_sum.
void apply_update(Mlp& model, const Eigen::VectorXd& peer_sum);

}  // namespace fppdl::learner
