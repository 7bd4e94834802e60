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
#include <span>
#include <vector>

#include <Eigen/Core>

#include "fppdl/common/random.hpp"
#include "fppdl/common/types.hpp"
#include "fppdl/learner/dataset.hpp"

namespace fppdl::learner {

// Fully connected ReLU network with a softmax output. All parameters live in
// one flat vector: for each layer, its weight matrix (out x in, row-major)
// followed by its bias.
class Mlp {
 public:
  explicit Mlp(std::vector<std::size_t> layer_sizes);

  const std::vector<std::size_t>& layer_sizes() const { return sizes_; }
  std::size_t input_dim() const { return sizes_.front(); }
  std::size_t output_dim() const { return sizes_.back(); }
  std::size_t param_count() const { return static_cast<std::size_t>(params_.size()); }

  Eigen::VectorXd& params() { return params_; }
  const Eigen::VectorXd& params() const { return params_; }
  void set_params(const Eigen::VectorXd& p);

  // Glorot-uniform weights, zero biases.
  void init_glorot(Rng& rng);

  // Rows of `x` are examples; returns pre-softmax scores.
  RowMatrix logits(const Eigen::Ref<const RowMatrix>& x) const;

  // Mean cross-entropy over the batch.
  double loss(const Eigen::Ref<const RowMatrix>& x, std::span<const std::uint8_t> labels) const;

  // Mean cross-entropy and its gradient with respect to params(), written
  // into `grad` (resized as needed).
  double loss_and_gradient(const Eigen::Ref<const RowMatrix>& x,
                           std::span<const std::uint8_t> labels, Eigen::VectorXd& grad) const;

  friend bool operator==(const Mlp& a, const Mlp& b) {
    return a.sizes_ == b.sizes_ && a.params_ == b.params_;
  }

 private:
  struct Offsets {
    std::size_t weights;
    std::size_t bias;
  };

  std::vector<std::size_t> sizes_;
  std::vector<Offsets> offsets_;
  Eigen::VectorXd params_;
};

// The federation model: 1024 inputs, one hidden layer of 128, 10 classes.
std::vector<std::size_t> default_architecture(std::size_t input_dim = 1024);

std::vector<int> predict_labels(const Mlp& model, const Eigen::Ref<const RowMatrix>& samples);
double evaluate(const Mlp& model, const Dataset& test);

// Checkpoint: "FPMD", u32 layer count, u64 sizes, u64 |w|, then |w| f64, all
// little-endian.
Bytes save_checkpoint(const Mlp& model);
Mlp load_checkpoint(ByteView bytes);

}  // namespace fppdl::learner
