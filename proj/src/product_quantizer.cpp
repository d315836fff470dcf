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

#include "brandnet/product_quantizer.hpp"

#include <stdexcept>
#include <string>

namespace brandnet {

double adc_distance(const DistanceTable& table, std::span<const std::uint8_t> code) {
  double d = 0.0;
  for (std::size_t s = 0; s < table.m; ++s) d += table.values[s * table.ksub + code[s]];
  return d;
}

ProductQuantizer::ProductQuantizer(std::size_t dim, std::size_t m, std::size_t ksub, std::vector<float> centroids)
    : dim_(dim), m_(m), ksub_(ksub), dsub_(m == 0 ? 0 : dim / m), centroids_(std::move(centroids)) {
  if (m == 0 || dim == 0 || dim % m != 0) {
    throw std::invalid_argument("ProductQuantizer: dim " + std::to_string(dim) + " is not divisible by m " +
                                std::to_string(m));
  }
  if (ksub == 0 || ksub > 256) throw std::invalid_argument("ProductQuantizer: ksub must lie in [1, 256]");
  if (centroids_.size() != m * ksub * dsub_) {
    throw std::invalid_argument("ProductQuantizer: centroid table has the wrong size");
  }
}

ProductQuantizer ProductQuantizer::train(std::span<const float> points, std::size_t dim, std::size_t m,
                                         std::size_t ksub, const KMeansOptions& options) {
  if (m == 0 || dim == 0 || dim % m != 0) {
    throw std::invalid_argument("pq_train: dim " + std::to_string(dim) + " is not divisible by m " + std::to_string(m));
  }
  if (ksub == 0 || ksub > 256) throw std::invalid_argument("pq_train: ksub must lie in [1, 256]");
  if (points.size() % dim != 0) throw std::invalid_argument("pq_train: points size is not a multiple of dim");
  const std::size_t n = points.size() / dim;
  if (n < ksub) {
    throw std::invalid_argument("pq_train: need at least ksub=" + std::to_string(ksub) + " points, got " +
                                std::to_string(n));
  }
  const std::size_t dsub = dim / m;
  std::vector<float> centroids(m * ksub * dsub);
  std::vector<float> slice(n * dsub);
  double distortion = 0.0;
  for (std::size_t s = 0; s < m; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      std::copy(points.begin() + i * dim + s * dsub, points.begin() + i * dim + (s + 1) * dsub,
                slice.begin() + i * dsub);
    }
    KMeansOptions sub = options;
    sub.seed = options.seed + s;
    const KMeansModel model = kmeans_fit(slice, dsub, ksub, sub);
    std::copy(model.centroids.begin(), model.centroids.end(), centroids.begin() + s * ksub * dsub);
    distortion += model.distortion;
  }
  ProductQuantizer pq(dim, m, ksub, std::move(centroids));
  pq.training_distortion_ = distortion;
  return pq;
}

void ProductQuantizer::encode(std::span<const float> x, std::span<std::uint8_t> code) const {
  if (x.size() != dim_ || code.size() != m_) throw std::invalid_argument("pq encode: dimension mismatch");
  for (std::size_t s = 0; s < m_; ++s) {
    const std::span<const float> book(centroids_.data() + s * ksub_ * dsub_, ksub_ * dsub_);
    code[s] = static_cast<std::uint8_t>(nearest_centroid(book, dsub_, x.data() + s * dsub_));
  }
}

std::vector<std::uint8_t> ProductQuantizer::encode(std::span<const float> x) const {
  std::vector<std::uint8_t> code(m_);
  encode(x, code);
  return code;
}

std::vector<float> ProductQuantizer::decode(std::span<const std::uint8_t> code) const {
  if (code.size() != m_) throw std::invalid_argument("pq decode: code size mismatch");
  std::vector<float> out(dim_);
  for (std::size_t s = 0; s < m_; ++s) {
    if (code[s] >= ksub_) throw std::invalid_argument("pq decode: code entry out of range");
    const auto c = sub_centroid(s, code[s]);
    std::copy(c.begin(), c.end(), out.begin() + s * dsub_);
  }
  return out;
}

DistanceTable ProductQuantizer::distance_table(std::span<const float> query) const {
  if (query.size() != dim_) throw std::invalid_argument("pq distance_table: query dimension mismatch");
  DistanceTable table{m_, ksub_, std::vector<double>(m_ * ksub_)};
  for (std::size_t s = 0; s < m_; ++s) {
    const float* q = query.data() + s * dsub_;
    for (std::size_t j = 0; j < ksub_; ++j) {
      const float* c = centroids_.data() + (s * ksub_ + j) * dsub_;
      double acc = 0.0;
      for (std::size_t t = 0; t < dsub_; ++t) {
        const double d = static_cast<double>(q[t]) - static_cast<double>(c[t]);
        acc += d * d;
      }
      table.values[s * ksub_ + j] = acc;
    }
  }
  return table;
}

}  // namespace brandnet
