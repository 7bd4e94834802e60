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

#include "fppdl/learner/model.hpp"

#include <cmath>
#include <random>

#include "fppdl/common/bytes.hpp"
#include "fppdl/common/error.hpp"

namespace fppdl::learner {
namespace {

using WeightMap = Eigen::Map<const RowMatrix>;
using MutableWeightMap = Eigen::Map<RowMatrix>;

constexpr std::size_t kEvalBatch = 1000;

// Applies softmax row by row in place and returns it.
void softmax_rows(RowMatrix& z) {
  for (Eigen::Index r = 0; r < z.rows(); ++r) {
    auto row = z.row(r);
    row.array() -= row.maxCoeff();
    row = row.array().exp().matrix();
    row /= row.sum();
  }
}

void check_batch(const Mlp& m, const Eigen::Ref<const RowMatrix>& x,
                 std::span<const std::uint8_t> labels) {
  require(static_cast<std::size_t>(x.cols()) == m.input_dim(), ErrorCode::kDimensionMismatch,
          "input width does not match the model");
  require(static_cast<std::size_t>(x.rows()) == labels.size(), ErrorCode::kDimensionMismatch,
          "batch and label counts differ");
  require(x.rows() > 0, ErrorCode::kEmpty, "empty batch");
  for (std::uint8_t y : labels) {
    require(y < m.output_dim(), ErrorCode::kOutOfRange, "label outside the output layer");
  }
}

}  // namespace

Mlp::Mlp(std::vector<std::size_t> layer_sizes) : sizes_(std::move(layer_sizes)) {
  require(sizes_.size() >= 2, ErrorCode::kInvalidArgument, "network needs input and output layers");
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    require(sizes_[l] > 0 && sizes_[l + 1] > 0, ErrorCode::kInvalidArgument, "empty layer");
    Offsets o;
    o.weights = total;
    total += sizes_[l + 1] * sizes_[l];
    o.bias = total;
    total += sizes_[l + 1];
    offsets_.push_back(o);
  }
  params_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(total));
}

void Mlp::set_params(const Eigen::VectorXd& p) {
  require(p.size() == params_.size(), ErrorCode::kDimensionMismatch, "parameter count mismatch");
  params_ = p;
}

void Mlp::init_glorot(Rng& rng) {
  params_.setZero();
  for (std::size_t l = 0; l < offsets_.size(); ++l) {
    const double fan_in = static_cast<double>(sizes_[l]);
    const double fan_out = static_cast<double>(sizes_[l + 1]);
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    const std::size_t n = sizes_[l] * sizes_[l + 1];
    for (std::size_t k = 0; k < n; ++k) {
      params_[static_cast<Eigen::Index>(offsets_[l].weights + k)] = dist(rng);
    }
  }
}

RowMatrix Mlp::logits(const Eigen::Ref<const RowMatrix>& x) const {
  require(static_cast<std::size_t>(x.cols()) == input_dim(), ErrorCode::kDimensionMismatch,
          "input width does not match the model");
  RowMatrix a = x;
  for (std::size_t l = 0; l < offsets_.size(); ++l) {
    const auto out = static_cast<Eigen::Index>(sizes_[l + 1]);
    const auto in = static_cast<Eigen::Index>(sizes_[l]);
    WeightMap w(params_.data() + offsets_[l].weights, out, in);
    Eigen::Map<const Eigen::RowVectorXd> b(params_.data() + offsets_[l].bias, out);
    RowMatrix z = a * w.transpose();
    z.rowwise() += b;
    if (l + 1 < offsets_.size()) z = z.cwiseMax(0.0);
    a = std::move(z);
  }
  return a;
}

double Mlp::loss(const Eigen::Ref<const RowMatrix>& x,
                 std::span<const std::uint8_t> labels) const {
  check_batch(*this, x, labels);
  RowMatrix p = logits(x);
  softmax_rows(p);
  double total = 0;
  for (Eigen::Index r = 0; r < p.rows(); ++r) {
    total -= std::log(std::max(p(r, labels[static_cast<std::size_t>(r)]), 1e-300));
  }
  return total / static_cast<double>(p.rows());
}

double Mlp::loss_and_gradient(const Eigen::Ref<const RowMatrix>& x,
                              std::span<const std::uint8_t> labels,
                              Eigen::VectorXd& grad) const {
  check_batch(*this, x, labels);
  const std::size_t layers = offsets_.size();
  const double inv_batch = 1.0 / static_cast<double>(x.rows());

  // activations[l] is the input to layer l; activations[layers] the softmax.
  std::vector<RowMatrix> activations(layers + 1);
  activations[0] = x;
  for (std::size_t l = 0; l < layers; ++l) {
    WeightMap w(params_.data() + offsets_[l].weights, static_cast<Eigen::Index>(sizes_[l + 1]),
                static_cast<Eigen::Index>(sizes_[l]));
    Eigen::Map<const Eigen::RowVectorXd> b(params_.data() + offsets_[l].bias,
                                           static_cast<Eigen::Index>(sizes_[l + 1]));
    RowMatrix z = activations[l] * w.transpose();
    z.rowwise() += b;
    if (l + 1 < layers) z = z.cwiseMax(0.0);
    activations[l + 1] = std::move(z);
  }
  RowMatrix delta = std::move(activations[layers]);
  softmax_rows(delta);
  double loss = 0;
  for (Eigen::Index r = 0; r < delta.rows(); ++r) {
    const auto y = labels[static_cast<std::size_t>(r)];
    loss -= std::log(std::max(delta(r, y), 1e-300));
    delta(r, y) -= 1.0;
  }
  delta *= inv_batch;

  grad.resize(params_.size());
  for (std::size_t l = layers; l-- > 0;) {
    const auto out = static_cast<Eigen::Index>(sizes_[l + 1]);
    const auto in = static_cast<Eigen::Index>(sizes_[l]);
    MutableWeightMap gw(grad.data() + offsets_[l].weights, out, in);
    Eigen::Map<Eigen::RowVectorXd> gb(grad.data() + offsets_[l].bias, out);
    gw.noalias() = delta.transpose() * activations[l];
    gb = delta.colwise().sum();
    if (l > 0) {
      WeightMap w(params_.data() + offsets_[l].weights, out, in);
      RowMatrix back = delta * w;
      // ReLU derivative, taken as 0 at the kink.
      back = (activations[l].array() > 0.0).select(back, 0.0);
      delta = std::move(back);
    }
  }
  return loss * inv_batch;
}

std::vector<std::size_t> default_architecture(std::size_t input_dim) {
  return {input_dim, 128, 10};
}

std::vector<int> predict_labels(const Mlp& model, const Eigen::Ref<const RowMatrix>& samples) {
  std::vector<int> out;
  if (samples.rows() == 0) return out;
  require(static_cast<std::size_t>(samples.cols()) == model.input_dim(),
          ErrorCode::kDimensionMismatch, "sample width does not match the model");
  out.reserve(static_cast<std::size_t>(samples.rows()));
  for (Eigen::Index start = 0; start < samples.rows();
       start += static_cast<Eigen::Index>(kEvalBatch)) {
    const Eigen::Index count =
        std::min<Eigen::Index>(static_cast<Eigen::Index>(kEvalBatch), samples.rows() - start);
    const RowMatrix z = model.logits(samples.middleRows(start, count));
    for (Eigen::Index r = 0; r < z.rows(); ++r) {
      Eigen::Index best;
      z.row(r).maxCoeff(&best);
      out.push_back(static_cast<int>(best));
    }
  }
  return out;
}

double evaluate(const Mlp& model, const Dataset& test) {
  if (test.empty()) return 0.0;
  const std::vector<int> pred = predict_labels(model, test.images);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == test.labels[i];
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

Bytes save_checkpoint(const Mlp& model) {
  ByteWriter w;
  w.raw(ByteView(reinterpret_cast<const std::uint8_t*>("FPMD"), 4));
  w.u32(static_cast<std::uint32_t>(model.layer_sizes().size()));
  for (std::size_t s : model.layer_sizes()) w.u64(s);
  w.u64(model.param_count());
  for (Eigen::Index i = 0; i < model.params().size(); ++i) w.f64(model.params()[i]);
  return std::move(w).take();
}

Mlp load_checkpoint(ByteView bytes) {
  ByteReader r(bytes);
  const ByteView magic = r.raw(4);
  require(std::equal(magic.begin(), magic.end(), "FPMD"), ErrorCode::kMalformed,
          "bad checkpoint magic");
  const std::uint32_t layers = r.u32();
  require(layers >= 2 && layers <= 64, ErrorCode::kMalformed, "bad layer count");
  std::vector<std::size_t> sizes;
  for (std::uint32_t i = 0; i < layers; ++i) {
    const std::uint64_t s = r.u64();
    require(s > 0 && s <= (1u << 24), ErrorCode::kMalformed, "bad layer size");
    sizes.push_back(s);
  }
  Mlp model(sizes);
  require(r.u64() == model.param_count(), ErrorCode::kMalformed,
          "parameter count does not match the architecture");
  require(r.remaining() == model.param_count() * 8, ErrorCode::kMalformed,
          "checkpoint payload truncated");
  for (Eigen::Index i = 0; i < model.params().size(); ++i) model.params()[i] = r.f64();
  return model;
}

}  // namespace fppdl::learner
