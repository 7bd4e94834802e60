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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fppdl/common/types.hpp"

namespace fppdl::learner {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// A parsed IDX file. The payload stays in its on-disk big-endian encoding and
// is decoded element by element, so a 60000-image file costs its raw size.
struct IdxArray {
  std::uint8_t type = 0;  // 0x08 u8, 0x09 i8, 0x0B i16, 0x0C i32, 0x0D f32, 0x0E f64
  std::vector<std::uint32_t> dims;
  Bytes payload;

  std::size_t element_size() const;
  std::size_t element_count() const;
  double at(std::size_t index) const;
};

IdxArray parse_idx(ByteView bytes);
IdxArray read_idx(const std::filesystem::path& path);
Bytes serialize_idx(const IdxArray& array);

// Builds an f64 IDX array from a row-major matrix (one row per sample).
IdxArray idx_from_matrix(const RowMatrix& rows, std::uint32_t height, std::uint32_t width);

struct Dataset {
  RowMatrix images;  // one standardized example per row
  std::vector<std::uint8_t> labels;

  std::size_t size() const { return labels.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(images.cols()); }
  bool empty() const { return labels.empty(); }
  Dataset subset(std::span<const std::size_t> indices) const;
};

// Image geometry after the loader's padding step: 28x28 sources are zero
// padded to 32x32 with the digit centered; other sizes pass through.
struct ImageLayout {
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::uint32_t source_rows = 0;
  std::uint32_t source_cols = 0;
  std::size_t dim() const { return std::size_t{rows} * cols; }
};

ImageLayout layout_for(const IdxArray& images);

// Per-feature mean and standard deviation over a training image set.
// Features whose deviation is below 1e-8 (e.g. padding) keep scale 1.
class Standardizer {
 public:
  static Standardizer fit(const IdxArray& images);
  std::span<const double> mean() const { return mean_; }
  std::span<const double> scale() const { return scale_; }
  std::size_t dim() const { return mean_.size(); }

  // Pads and standardizes the selected examples into rows of a matrix.
  RowMatrix transform(const IdxArray& images, std::span<const std::size_t> indices) const;

 private:
  std::vector<double> mean_;
  std::vector<double> scale_;
};

// Pairs an image file with its label file. When `standardizer` is null it is
// fitted on this image file.
Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels,
                 const Standardizer* standardizer = nullptr);

// Training pool plus held-out test set, as the simulator consumes them.
class DataSource {
 public:
  virtual ~DataSource() = default;
  virtual std::size_t train_size() const = 0;
  virtual Dataset train_subset(std::span<const std::size_t> indices) const = 0;
  virtual const Dataset& test() const = 0;
};

class InMemorySource final : public DataSource {
 public:
  InMemorySource(Dataset train, Dataset test) : train_(std::move(train)), test_(std::move(test)) {}
  std::size_t train_size() const override { return train_.size(); }
  Dataset train_subset(std::span<const std::size_t> indices) const override {
    return train_.subset(indices);
  }
  const Dataset& test() const override { return test_; }

 private:
  Dataset train_;
  Dataset test_;
};

// The four MNIST IDX files under one directory, standardized with statistics
// from the training images.
class MnistSource final : public DataSource {
 public:
  explicit MnistSource(const std::filesystem::path& root);

  std::size_t train_size() const override { return train_labels_.size(); }
  const Dataset& test() const override { return test_; }
  Dataset train_subset(std::span<const std::size_t> indices) const override;
  const Standardizer& standardizer() const { return standardizer_; }

  // Resolves the files under `root`, accepting either the canonical
  // "train-images-idx3-ubyte" names or the dotted "train-images.idx3-ubyte".
  static std::filesystem::path find_file(const std::filesystem::path& root,
                                         const std::string& stem, const std::string& suffix);

 private:
  IdxArray train_images_;
  std::vector<std::uint8_t> train_labels_;
  Standardizer standardizer_;
  Dataset test_;
};

}  // namespace fppdl::learner
