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

#include "fppdl/protocol/config.hpp"

#include <nlohmann/json.hpp>

#include "fppdl/common/error.hpp"

namespace fppdl::protocol {
namespace {

using nlohmann::ordered_json;

void check(bool ok, const std::string& message) {
  require(ok, ErrorCode::kConfig, message);
}

template <typename T>
void read(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::kFppdl:
      return "fppdl";
    case Mode::kStandalone:
      return "standalone";
    case Mode::kCentralized:
      return "centralized";
    case Mode::kDssgd:
      return "dssgd";
  }
  return "unknown";
}

Mode parse_mode(std::string_view text) {
  for (Mode m : {Mode::kFppdl, Mode::kStandalone, Mode::kCentralized, Mode::kDssgd}) {
    if (text == to_string(m)) return m;
  }
  fail(ErrorCode::kConfig, "unknown mode '" + std::string(text) + "'");
}

void ExperimentConfig::validate() const {
  check(setting >= 1 && setting <= 3, "setting must be 1, 2 or 3");
  check(parties >= 2, "need at least two parties");
  check(!free_rider || *free_rider < parties, "free_rider index out of range");
  check(honest_count() >= 1, "need at least one honest party");
  check(shard_size > 0, "shard_size must be positive");
  check(lambda > 0 && lambda <= 1, "lambda must lie in (0, 1]");
  check(lambda_min > 0 && lambda_min <= lambda_max && lambda_max <= 1,
        "lambda range must satisfy 0 < min <= max <= 1");
  check(sgd.epochs >= 1, "epochs must be at least 1");
  check(sgd.batch_size >= 1, "batch_size must be at least 1");
  check(sgd.learning_rate >= 0 && sgd.decay >= 0, "learning rate and decay must be non-negative");
  for (std::size_t h : hidden) check(h > 0, "hidden layer sizes must be positive");
  check(noise_scale >= 0, "noise_scale must be non-negative");
  check(!cth || (*cth >= 0 && *cth <= 1), "cth must lie in [0, 1]");
  check(scale_bits >= 0 && scale_bits <= 40, "scale_bits must lie in [0, 40]");
  check(clip > 0, "clip must be positive");
  check(dssgd_upload > 0 && dssgd_upload <= 1, "dssgd_upload must lie in (0, 1]");
  if (setting == 3) {
    check(min_shard * honest_count() <= setting3_total(),
          "min_shard times party count exceeds the Setting 3 total");
  }
}

std::string ExperimentConfig::to_json() const {
  ordered_json j;
  j["mode"] = std::string(to_string(mode));
  j["setting"] = setting;
  j["parties"] = parties;
  j["shard_size"] = shard_size;
  j["total_examples"] = total_examples;
  j["min_shard"] = min_shard;
  j["lambda"] = lambda;
  j["lambda_range"] = {lambda_min, lambda_max};
  j["hidden"] = hidden;
  j["epochs"] = sgd.epochs;
  j["batch_size"] = sgd.batch_size;
  j["learning_rate"] = sgd.learning_rate;
  j["decay"] = sgd.decay;
  j["pretrain_epochs"] = pretrain_epochs;
  j["rounds"] = rounds;
  j["seeds"] = {{"data", seeds.data}, {"model", seeds.model}, {"sampling", seeds.sampling}};
  j["free_rider"] = free_rider ? ordered_json(*free_rider) : ordered_json(nullptr);
  j["noise_scale"] = noise_scale;
  j["cth"] = cth ? ordered_json(*cth) : ordered_json(nullptr);
  j["encryption"] = encryption;
  j["scale_bits"] = scale_bits;
  j["clip"] = clip;
  j["dssgd_upload"] = dssgd_upload;
  j["test_limit"] = test_limit;
  return j.dump(2) + "\n";
}

ExperimentConfig ExperimentConfig::from_json(std::string_view text) {
  static const std::vector<std::string> kKeys = {
      "mode",       "setting",     "parties",         "shard_size",  "total_examples",
      "min_shard",  "lambda",      "lambda_range",    "hidden",      "epochs",
      "batch_size", "learning_rate", "decay",         "pretrain_epochs", "rounds",
      "seeds",      "free_rider",  "noise_scale",     "cth",         "encryption",
      "scale_bits", "clip",        "dssgd_upload",    "test_limit"};
  ExperimentConfig c;
  try {
    const auto j = nlohmann::json::parse(text);
    check(j.is_object(), "config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      check(std::find(kKeys.begin(), kKeys.end(), key) != kKeys.end(),
            "unknown config key '" + key + "'");
    }
    if (j.contains("mode")) c.mode = parse_mode(j.at("mode").get<std::string>());
    read(j, "setting", c.setting);
    read(j, "parties", c.parties);
    read(j, "shard_size", c.shard_size);
    read(j, "total_examples", c.total_examples);
    read(j, "min_shard", c.min_shard);
    read(j, "lambda", c.lambda);
    if (j.contains("lambda_range")) {
      const auto r = j.at("lambda_range").get<std::vector<double>>();
      check(r.size() == 2, "lambda_range must have two entries");
      c.lambda_min = r[0];
      c.lambda_max = r[1];
    }
    read(j, "hidden", c.hidden);
    read(j, "epochs", c.sgd.epochs);
    read(j, "batch_size", c.sgd.batch_size);
    read(j, "learning_rate", c.sgd.learning_rate);
    read(j, "decay", c.sgd.decay);
    read(j, "pretrain_epochs", c.pretrain_epochs);
    read(j, "rounds", c.rounds);
    if (j.contains("seeds")) {
      const auto& s = j.at("seeds");
      read(s, "data", c.seeds.data);
      read(s, "model", c.seeds.model);
      read(s, "sampling", c.seeds.sampling);
    }
    if (j.contains("free_rider") && !j.at("free_rider").is_null()) {
      c.free_rider = j.at("free_rider").get<std::size_t>();
    }
    read(j, "noise_scale", c.noise_scale);
    if (j.contains("cth") && !j.at("cth").is_null()) c.cth = j.at("cth").get<double>();
    read(j, "encryption", c.encryption);
    read(j, "scale_bits", c.scale_bits);
    read(j, "clip", c.clip);
    read(j, "dssgd_upload", c.dssgd_upload);
    read(j, "test_limit", c.test_limit);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kConfig, std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return a.to_json() == b.to_json();
}

}  // namespace fppdl::protocol
