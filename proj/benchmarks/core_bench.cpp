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

#include <benchmark/benchmark.h>

#include <random>

#include "fppdl/common/random.hpp"
#include "fppdl/crypto/codec.hpp"
#include "fppdl/crypto/keystream.hpp"
#include "fppdl/crypto/onion.hpp"
#include "fppdl/learner/model.hpp"
#include "fppdl/learner/train.hpp"

namespace {

using namespace fppdl;

constexpr std::size_t kModelParams = 1024 * 128 + 128 + 128 * 10 + 10;

void BM_DealPads(benchmark::State& state) {
  const crypto::FixedPointCodec codec;
  const crypto::KeystreamDealer dealer(std::uint64_t{1});
  const std::vector<PartyId> set = {0, 1, 2, 3};
  std::uint64_t round = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dealer.deal(set, {++round, 0}, kModelParams, codec));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(kModelParams * set.size()));
}
BENCHMARK(BM_DealPads)->Unit(benchmark::kMillisecond);

void BM_AggregateDecrypt(benchmark::State& state) {
  const auto n = static_cast<PartyId>(state.range(0));
  const crypto::FixedPointCodec codec;
  std::vector<PartyId> set(n);
  for (PartyId i = 0; i < n; ++i) set[i] = i;
  const auto pads = crypto::KeystreamDealer(std::uint64_t{1}).deal(set, {1, 0}, kModelParams, codec);
  std::mt19937_64 rng(1);
  std::vector<crypto::CipherVector> ciphers;
  for (PartyId i = 1; i < n; ++i) {
    std::vector<crypto::Word> plain(kModelParams);
    for (auto& w : plain) w = rng() & (codec.modulus() - 1);
    ciphers.push_back(crypto::encrypt_vector(plain, pads[i], codec));
  }
  for (auto _ : state) benchmark::DoNotOptimize(crypto::aggr_dec(ciphers, pads[0], codec));
}
BENCHMARK(BM_AggregateDecrypt)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_OnionRoundTrip(benchmark::State& state) {
  crypto::Drbg rng(std::uint64_t{2});
  const auto keys = crypto::KeyBundle::generate(rng);
  crypto::CipherVector c{1, 1, std::vector<crypto::Word>(static_cast<std::size_t>(state.range(0)), 7)};
  const Bytes plain = crypto::serialize(c);
  for (auto _ : state) {
    const Bytes wire = crypto::onion_wrap(plain, keys.recipient.public_key, rng).serialize();
    benchmark::DoNotOptimize(crypto::onion_unwrap(wire, keys.recipient.secret_key));
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(plain.size()));
}
BENCHMARK(BM_OnionRoundTrip)->Arg(13000)->Arg(kModelParams)->Unit(benchmark::kMillisecond);

void BM_SelectLargest(benchmark::State& state) {
  Eigen::VectorXd g(static_cast<Eigen::Index>(kModelParams));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0, 1);
  for (Eigen::Index i = 0; i < g.size(); ++i) g[i] = n(rng);
  const auto d = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(learner::select_largest(g, d));
}
BENCHMARK(BM_SelectLargest)->Arg(1000)->Arg(13000)->Arg(65000)->Unit(benchmark::kMillisecond);

void BM_TrainEpoch(benchmark::State& state) {
  learner::Dataset shard;
  Rng data(4);
  std::normal_distribution<double> n(0, 1);
  shard.images = learner::RowMatrix::NullaryExpr(600, 1024, [&] { return n(data); });
  for (std::size_t i = 0; i < 600; ++i) shard.labels.push_back(static_cast<std::uint8_t>(i % 10));
  learner::Mlp model(learner::default_architecture());
  Rng init(5);
  model.init_glorot(init);
  learner::SgdConfig cfg;
  learner::SgdState sgd;
  Rng shuffle(6);
  for (auto _ : state) benchmark::DoNotOptimize(learner::train_local(model, shard, cfg, sgd, shuffle));
  state.SetItemsProcessed(state.iterations() * 600);
}
BENCHMARK(BM_TrainEpoch)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
