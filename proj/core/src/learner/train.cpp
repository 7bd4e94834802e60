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

#include "fppdl/learner/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fppdl/common/error.hpp"

namespace fppdl::learner {

Eigen::VectorXd train_local(Mlp& model, const Dataset& shard, const SgdConfig& config,
                            SgdState& state, Rng& rng) {
  require(!shard.empty(), ErrorCode::kEmpty, "cannot train on an empty shard");
  require(config.batch_size > 0, ErrorCode::kInvalidArgument, "batch size must be positive");
  require(config.learning_rate >= 0 && config.decay >= 0, ErrorCode::kInvalidArgument,
          "learning rate and decay must be non-negative");
  const Eigen::VectorXd before = model.params();
  std::vector<std::size_t> order(shard.size());
  std::iota(order.begin(), order.end(), 0);
  Eigen::VectorXd grad;
  RowMatrix batch;
  std::vector<std::uint8_t> labels;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t count = std::min(config.batch_size, order.size() - start);
      batch.resize(static_cast<Eigen::Index>(count), shard.images.cols());
      labels.resize(count);
      for (std::size_t k = 0; k < count; ++k) {
        batch.row(static_cast<Eigen::Index>(k)) =
            shard.images.row(static_cast<Eigen::Index>(order[start + k]));
        labels[k] = shard.labels[order[start + k]];
      }
      const double lr =
          config.learning_rate / (1.0 + config.decay * static_cast<double>(state.iterations));
      model.loss_and_gradient(batch, labels, grad);
      model.params().noalias() -= lr * grad;
      ++state.iterations;
    }
  }
  return model.params() - before;
}

MaskedGradient select_largest(const Eigen::VectorXd& grad, std::size_t d) {
  const auto n = static_cast<std::size_t>(grad.size());
  require(d <= n, ErrorCode::kOutOfRange, "cannot keep more coordinates than exist");
  MaskedGradient out;
  out.values = Eigen::VectorXd::Zero(grad.size());
  if (d == 0) return out;
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  auto before = [&](std::size_t a, std::size_t b) {
    const double ma = std::abs(grad[static_cast<Eigen::Index>(a)]);
    const double mb = std::abs(grad[static_cast<Eigen::Index>(b)]);
    return ma != mb ? ma > mb : a < b;
  };
  if (d < n) std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(d), idx.end(), before);
  idx.resize(d);
  std::sort(idx.begin(), idx.end());
  for (std::size_t i : idx) {
    out.values[static_cast<Eigen::Index>(i)] = grad[static_cast<Eigen::Index>(i)];
  }
  out.kept = std::move(idx);
  return out;
}

void apply_update(Mlp& model, const Eigen::VectorXd& peer_sum) {
  require(peer_sum.size() == model.params().size(), ErrorCode::kDimensionMismatch,
          "peer aggregate length differs from the model");
  model.params() += peer_sum;
}

}  // namespace fppdl::learner
