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

namespace brandnet {

// Squared Euclidean distance over `dim` floats.
float l2_sqr(const float* a, const float* b, std::size_t dim);

struct KMeansOptions {
  std::size_t max_iters = 25;  // Lloyd updates after k-means++ seeding
  std::uint64_t seed = 0;
  double tolerance = 1e-6;  // stop when the relative distortion drop falls below this
};

struct KMeansModel {
  std::size_t k = 0;
  std::size_t dim = 0;
  std::vector<float> centroids;  // k x dim, row-major
  double distortion = 0.0;       // sum of squared distances to the assigned centroid
  std::vector<double> trace;     // distortion after seeding and after every Lloyd update

  std::span<const float> centroid(std::size_t c) const { return {centroids.data() + c * dim, dim}; }
};

// k-means++ seeding then Lloyd iterations. Empty clusters are reseeded to
// the point currently farthest from its centroid. Deterministic in seed.
// Throws std::invalid_argument when n < k or k == 0.
KMeansModel kmeans_fit(std::span<const float> points, std::size_t dim, std::size_t k,
                       const KMeansOptions& options = {});

// Index of the closest centroid, lowest index on ties.
std::size_t nearest_centroid(std::span<const float> centroids, std::size_t dim, const float* x,
                             float* distance = nullptr);

// Number of kmeans_fit calls made by this process. Lets callers assert that
// an operation performed no training.
std::uint64_t kmeans_fit_count();

}  // namespace brandnet
