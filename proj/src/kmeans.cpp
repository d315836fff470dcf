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

#include "brandnet/kmeans.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace brandnet {

namespace {
std::atomic<std::uint64_t> g_fit_count{0};
}  // namespace

std::uint64_t kmeans_fit_count() { return g_fit_count.load(); }

float l2_sqr(const float* a, const float* b, std::size_t dim) {
  float acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  std::size_t i = 0;
  for (; i + 8 <= dim; i += 8) {
    for (int l = 0; l < 8; ++l) {
      const float d = a[i + l] - b[i + l];
      acc[l] += d * d;
    }
  }
  float tail = 0.0f;
  for (; i < dim; ++i) {
    const float d = a[i] - b[i];
    tail += d * d;
  }
  return ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7])) + tail;
}

std::size_t nearest_centroid(std::span<const float> centroids, std::size_t dim, const float* x, float* distance) {
  const std::size_t k = centroids.size() / dim;
  std::size_t best = 0;
  float best_d = std::numeric_limits<float>::infinity();
  for (std::size_t c = 0; c < k; ++c) {
    const float d = l2_sqr(x, centroids.data() + c * dim, dim);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  if (distance) *distance = best_d;
  return best;
}

namespace {

std::vector<float> seed_plus_plus(std::span<const float> points, std::size_t n, std::size_t dim, std::size_t k,
                                  std::mt19937_64& rng) {
  std::vector<float> centroids;
  centroids.reserve(k * dim);
  std::vector<char> chosen(n, 0);
  auto take = [&](std::size_t i) {
    chosen[i] = 1;
    centroids.insert(centroids.end(), points.begin() + i * dim, points.begin() + (i + 1) * dim);
  };

  take(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = l2_sqr(&points[i * dim], centroids.data(), dim);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += chosen[i] ? 0.0 : d2[i];
    std::size_t pick = n;
    if (total > 0.0) {
      const double target = unit(rng) * total;
      double run = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (chosen[i] || d2[i] <= 0.0) continue;
        run += d2[i];
        pick = i;
        if (run > target) break;
      }
    }
    if (pick == n) {
      // Every remaining point coincides with a centroid: pick uniformly.
      std::vector<std::size_t> rest;
      for (std::size_t i = 0; i < n; ++i) {
        if (!chosen[i]) rest.push_back(i);
      }
      pick = rest[std::uniform_int_distribution<std::size_t>(0, rest.size() - 1)(rng)];
    }
    take(pick);
    const float* cen = centroids.data() + c * dim;
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], static_cast<double>(l2_sqr(&points[i * dim], cen, dim)));
  }
  return centroids;
}

}  // namespace

KMeansModel kmeans_fit(std::span<const float> points, std::size_t dim, std::size_t k, const KMeansOptions& options) {
  if (dim == 0 || points.size() % dim != 0) throw std::invalid_argument("kmeans_fit: points size is not a multiple of dim");
  const std::size_t n = points.size() / dim;
  if (k == 0) throw std::invalid_argument("kmeans_fit: k must be >= 1");
  if (n < k) {
    throw std::invalid_argument("kmeans_fit: need at least k=" + std::to_string(k) + " points, got " + std::to_string(n));
  }
  g_fit_count.fetch_add(1);

  std::mt19937_64 rng(options.seed);
  KMeansModel model;
  model.k = k;
  model.dim = dim;
  model.centroids = seed_plus_plus(points, n, dim, k, rng);

  std::vector<std::size_t> assign(n);
  std::vector<float> dist(n);
  auto assign_all = [&] {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      assign[i] = nearest_centroid(model.centroids, dim, &points[i * dim], &dist[i]);
      total += dist[i];
    }
    return total;
  };

  double current = assign_all();
  model.trace.push_back(current);
  std::vector<double> sums(k * dim);
  std::vector<std::size_t> counts(k);
  for (std::size_t it = 0; it < options.max_iters && current > 0.0; ++it) {
    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = assign[i];
      ++counts[c];
      for (std::size_t j = 0; j < dim; ++j) sums[c * dim + j] += points[i * dim + j];
    }
    // Farthest points first, lowest index on ties.
    std::vector<std::size_t> by_distance;
    std::size_t next_far = 0;
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        for (std::size_t j = 0; j < dim; ++j) {
          model.centroids[c * dim + j] = static_cast<float>(sums[c * dim + j] / static_cast<double>(counts[c]));
        }
        continue;
      }
      if (by_distance.empty()) {
        by_distance.resize(n);
        std::iota(by_distance.begin(), by_distance.end(), std::size_t{0});
        std::stable_sort(by_distance.begin(), by_distance.end(),
                         [&](std::size_t a, std::size_t b) { return dist[a] > dist[b]; });
      }
      const std::size_t p = by_distance[next_far++ % n];
      std::copy(points.begin() + p * dim, points.begin() + (p + 1) * dim, model.centroids.begin() + c * dim);
    }

    const double previous = current;
    current = assign_all();
    model.trace.push_back(current);
    if (previous - current <= options.tolerance * previous) break;
  }
  model.distortion = current;
  return model;
}

}  // namespace brandnet
