// Copyright 2026 The Brandnet Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "brandnet/kmeans.hpp"

namespace brandnet {

// Per-query lookup table: entry (s, j) is the squared distance between the
// query's s-th subvector and sub-centroid j of subspace s.
struct DistanceTable {
  std::size_t m = 0;
  std::size_t ksub = 0;
  std::vector<double> values;  // m x ksub

  double at(std::size_t s, std::size_t j) const { return values[s * ksub + j]; }
};

// Asymmetric distance: sum over subspaces of table[s][code[s]].
double adc_distance(const DistanceTable& table, std::span<const std::uint8_t> code);

// Splits vectors into m contiguous subvectors of dim / m floats, each
// quantized against its own codebook of ksub <= 256 centroids, so a code is
// m bytes.
class ProductQuantizer {
 public:
  // Throws std::invalid_argument when dim % m != 0, ksub is outside
  // [1, 256] or the centroid count does not match.
  ProductQuantizer(std::size_t dim, std::size_t m, std::size_t ksub, std::vector<float> centroids);

  // Independent k-means per subspace; subspace s uses seed options.seed + s.
  static ProductQuantizer train(std::span<const float> points, std::size_t dim, std::size_t m, std::size_t ksub,
                                const KMeansOptions& options = {});

  std::size_t dim() const { return dim_; }
  std::size_t m() const { return m_; }
  std::size_t ksub() const { return ksub_; }
  std::size_t dsub() const { return dsub_; }
  std::size_t code_size() const { return m_; }

  // m x ksub x dsub, row-major.
  const std::vector<float>& centroids() const { return centroids_; }
  std::span<const float> sub_centroid(std::size_t s, std::size_t j) const {
    return {centroids_.data() + (s * ksub_ + j) * dsub_, dsub_};
  }

  // Sum over subspaces of the final k-means distortion on the training set.
  double training_distortion() const { return training_distortion_; }

  void encode(std::span<const float> x, std::span<std::uint8_t> code) const;
  std::vector<std::uint8_t> encode(std::span<const float> x) const;
  std::vector<float> decode(std::span<const std::uint8_t> code) const;

  DistanceTable distance_table(std::span<const float> query) const;

  friend bool operator==(const ProductQuantizer& a, const ProductQuantizer& b) {
    return a.dim_ == b.dim_ && a.m_ == b.m_ && a.ksub_ == b.ksub_ && a.centroids_ == b.centroids_;
  }

 private:
  std::size_t dim_;
  std::size_t m_;
  std::size_t ksub_;
  std::size_t dsub_;
  std::vector<float> centroids_;
  double training_distortion_ = 0.0;
};

}  // namespace brandnet
