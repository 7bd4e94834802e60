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

#include "fppdl/learner/dataset.hpp"

#include <bit>
#include <cmath>

#include "fppdl/common/error.hpp"
#include "fppdl/common/io.hpp"

namespace fppdl::learner {
namespace {

std::uint64_t read_be(const std::uint8_t* p, std::size_t n) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < n; ++i) v = (v << 8) | p[i];
  return v;
}

std::vector<std::uint8_t> labels_from(const IdxArray& a) {
  require(a.dims.size() == 1, ErrorCode::kMalformed, "label file must be one-dimensional");
  std::vector<std::uint8_t> out(a.element_count());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double v = a.at(i);
    require(v >= 0 && v <= 255 && v == std::floor(v), ErrorCode::kMalformed,
            "label out of range");
    out[i] = static_cast<std::uint8_t>(v);
  }
  return out;
}

}  // namespace

std::size_t IdxArray::element_size() const {
  switch (type) {
    case 0x08:
    case 0x09:
      return 1;
    case 0x0B:
      return 2;
    case 0x0C:
    case 0x0D:
      return 4;
    case 0x0E:
      return 8;
    default:
      fail(ErrorCode::kMalformed, "unknown IDX element type");
  }
}

std::size_t IdxArray::element_count() const {
  std::size_t n = 1;
  for (std::uint32_t d : dims) n *= d;
  return n;
}

double IdxArray::at(std::size_t index) const {
  const std::size_t w = element_size();
  const std::uint64_t v = read_be(payload.data() + index * w, w);
  switch (type) {
    case 0x08:
      return static_cast<double>(v);
    case 0x09:
      return static_cast<double>(static_cast<std::int8_t>(v));
    case 0x0B:
      return static_cast<double>(static_cast<std::int16_t>(v));
    case 0x0C:
      return static_cast<double>(static_cast<std::int32_t>(v));
    case 0x0D:
      return static_cast<double>(std::bit_cast<float>(static_cast<std::uint32_t>(v)));
    default:
      return std::bit_cast<double>(v);
  }
}

IdxArray parse_idx(ByteView bytes) {
  require(bytes.size() >= 4, ErrorCode::kMalformed, "IDX header truncated");
  require(bytes[0] == 0 && bytes[1] == 0, ErrorCode::kMalformed, "bad IDX magic");
  IdxArray a;
  a.type = bytes[2];
  (void)a.element_size();
  const std::size_t rank = bytes[3];
  require(rank >= 1, ErrorCode::kMalformed, "IDX rank must be positive");
  require(bytes.size() >= 4 + 4 * rank, ErrorCode::kMalformed, "IDX dimensions truncated");
  std::size_t count = 1;
  for (std::size_t i = 0; i < rank; ++i) {
    const auto d = static_cast<std::uint32_t>(read_be(bytes.data() + 4 + 4 * i, 4));
    a.dims.push_back(d);
    require(d == 0 || count <= (std::size_t{1} << 40) / d, ErrorCode::kMalformed,
            "IDX dimensions too large");
    count *= d;
  }
  const std::size_t offset = 4 + 4 * rank;
  const std::size_t expected = count * a.element_size();
  require(bytes.size() - offset >= expected, ErrorCode::kMalformed, "IDX payload truncated");
  require(bytes.size() - offset == expected, ErrorCode::kMalformed, "trailing bytes after IDX payload");
  a.payload.assign(bytes.begin() + static_cast<std::ptrdiff_t>(offset), bytes.end());
  return a;
}

IdxArray read_idx(const std::filesystem::path& path) {
  try {
    return parse_idx(read_file(path));
  } catch (const Error& e) {
    fail(e.code(), path.string() + ": " + e.what());
  }
}

Bytes serialize_idx(const IdxArray& a) {
  Bytes out = {0, 0, a.type, static_cast<std::uint8_t>(a.dims.size())};
  for (std::uint32_t d : a.dims) {
    for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(d >> s));
  }
  out.insert(out.end(), a.payload.begin(), a.payload.end());
  return out;
}

IdxArray idx_from_matrix(const RowMatrix& rows, std::uint32_t height, std::uint32_t width) {
  require(static_cast<std::size_t>(rows.cols()) == std::size_t{height} * width,
          ErrorCode::kDimensionMismatch, "sample width does not match the image geometry");
  IdxArray a;
  a.type = 0x0E;
  a.dims = {static_cast<std::uint32_t>(rows.rows()), height, width};
  a.payload.reserve(static_cast<std::size_t>(rows.size()) * 8);
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    for (Eigen::Index c = 0; c < rows.cols(); ++c) {
      const auto bits = std::bit_cast<std::uint64_t>(rows(r, c));
      for (int s = 56; s >= 0; s -= 8) a.payload.push_back(static_cast<std::uint8_t>(bits >> s));
    }
  }
  return a;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.images.resize(static_cast<Eigen::Index>(indices.size()), images.cols());
  out.labels.reserve(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    require(indices[k] < size(), ErrorCode::kOutOfRange, "subset index out of range");
    out.images.row(static_cast<Eigen::Index>(k)) = images.row(static_cast<Eigen::Index>(indices[k]));
    out.labels.push_back(labels[indices[k]]);
  }
  return out;
}

ImageLayout layout_for(const IdxArray& images) {
  require(images.dims.size() >= 2, ErrorCode::kMalformed, "image file needs a sample dimension");
  ImageLayout l;
  if (images.dims.size() == 2) {
    l.source_rows = 1;
    l.source_cols = images.dims[1];
  } else {
    l.source_rows = images.dims[1];
    l.source_cols = images.dims[2];
    for (std::size_t i = 3; i < images.dims.size(); ++i) l.source_cols *= images.dims[i];
  }
  l.rows = l.source_rows;
  l.cols = l.source_cols;
  if (images.dims.size() == 3 && l.source_rows == 28 && l.source_cols == 28) {
    l.rows = 32;
    l.cols = 32;
  }
  return l;
}

namespace {

// Writes example `n` of `images`, padded per layout, into `out` (length dim).
void padded_example(const IdxArray& images, const ImageLayout& l, std::size_t n, double* out) {
  std::fill(out, out + l.dim(), 0.0);
  const std::size_t top = (l.rows - l.source_rows) / 2;
  const std::size_t left = (l.cols - l.source_cols) / 2;
  const std::size_t base = n * std::size_t{l.source_rows} * l.source_cols;
  for (std::size_t r = 0; r < l.source_rows; ++r) {
    for (std::size_t c = 0; c < l.source_cols; ++c) {
      out[(r + top) * l.cols + c + left] = images.at(base + r * l.source_cols + c);
    }
  }
}

}  // namespace

Standardizer Standardizer::fit(const IdxArray& images) {
  const ImageLayout l = layout_for(images);
  const std::size_t n = images.dims[0];
  require(n > 0, ErrorCode::kEmpty, "cannot standardize an empty image set");
  const std::size_t dim = l.dim();
  std::vector<double> sum(dim, 0.0), sq(dim, 0.0), row(dim);
  for (std::size_t i = 0; i < n; ++i) {
    padded_example(images, l, i, row.data());
    for (std::size_t f = 0; f < dim; ++f) {
      sum[f] += row[f];
      sq[f] += row[f] * row[f];
    }
  }
  Standardizer s;
  s.mean_.resize(dim);
  s.scale_.resize(dim);
  for (std::size_t f = 0; f < dim; ++f) {
    const double mean = sum[f] / static_cast<double>(n);
    const double var = std::max(0.0, sq[f] / static_cast<double>(n) - mean * mean);
    const double sd = std::sqrt(var);
    s.mean_[f] = mean;
    s.scale_[f] = sd < 1e-8 ? 1.0 : sd;
  }
  return s;
}

RowMatrix Standardizer::transform(const IdxArray& images,
                                  std::span<const std::size_t> indices) const {
  const ImageLayout l = layout_for(images);
  require(l.dim() == dim(), ErrorCode::kDimensionMismatch,
          "image geometry differs from the fitted statistics");
  RowMatrix out(static_cast<Eigen::Index>(indices.size()), static_cast<Eigen::Index>(dim()));
  for (std::size_t k = 0; k < indices.size(); ++k) {
    require(indices[k] < images.dims[0], ErrorCode::kOutOfRange, "image index out of range");
    double* row = out.row(static_cast<Eigen::Index>(k)).data();
    padded_example(images, l, indices[k], row);
    for (std::size_t f = 0; f < dim(); ++f) row[f] = (row[f] - mean_[f]) / scale_[f];
  }
  return out;
}

Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels,
                 const Standardizer* standardizer) {
  const IdxArray img = read_idx(images);
  const IdxArray lab = read_idx(labels);
  layout_for(img);
  require(lab.dims.size() == 1 && lab.dims[0] == img.dims[0], ErrorCode::kMalformed,
          "image and label counts differ");
  const Standardizer fitted = standardizer ? *standardizer : Standardizer::fit(img);
  std::vector<std::size_t> all(img.dims[0]);
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  Dataset d;
  d.images = fitted.transform(img, all);
  d.labels = labels_from(lab);
  return d;
}

std::filesystem::path MnistSource::find_file(const std::filesystem::path& root,
                                             const std::string& stem,
                                             const std::string& suffix) {
  for (const std::string& name : {stem + "-" + suffix, stem + "." + suffix}) {
    if (std::filesystem::exists(root / name)) return root / name;
  }
  fail(ErrorCode::kIo, "missing " + (root / (stem + "-" + suffix)).string());
}

MnistSource::MnistSource(const std::filesystem::path& root) {
  train_images_ = read_idx(find_file(root, "train-images", "idx3-ubyte"));
  const IdxArray train_labels = read_idx(find_file(root, "train-labels", "idx1-ubyte"));
  const IdxArray test_images = read_idx(find_file(root, "t10k-images", "idx3-ubyte"));
  const IdxArray test_labels = read_idx(find_file(root, "t10k-labels", "idx1-ubyte"));
  require(train_labels.dims[0] == train_images_.dims[0], ErrorCode::kMalformed,
          "train image and label counts differ");
  require(test_labels.dims[0] == test_images.dims[0], ErrorCode::kMalformed,
          "test image and label counts differ");
  train_labels_ = labels_from(train_labels);
  standardizer_ = Standardizer::fit(train_images_);
  std::vector<std::size_t> all(test_images.dims[0]);
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  test_.images = standardizer_.transform(test_images, all);
  test_.labels = labels_from(test_labels);
}

Dataset MnistSource::train_subset(std::span<const std::size_t> indices) const {
  Dataset d;
  d.images = standardizer_.transform(train_images_, indices);
  d.labels.reserve(indices.size());
  for (std::size_t i : indices) d.labels.push_back(train_labels_[i]);
  return d;
}

}  // namespace fppdl::learner
