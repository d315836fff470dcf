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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "brandnet/geometry.hpp"

namespace brandnet::losses {

// A loss value together with its gradient with respect to the inputs.
struct LossValue {
  double value = 0.0;
  std::vector<double> gradient;
};

inline constexpr double kProbabilityEpsilon = 1e-7;

// 0.5 x^2 for |x| < 1, |x| - 0.5 otherwise.
LossValue smooth_l1(double x);

// -label log p - (1 - label) log(1 - p), p clamped to [eps, 1 - eps].
// Gradient is d/dp evaluated at the clamped probability.
LossValue binary_cross_entropy(double p, int label);

// -w[label] * log softmax(logits)[label]. Gradient is w.r.t. the logits.
// Throws std::invalid_argument on an out-of-range label or weight size
// mismatch.
LossValue softmax_cross_entropy(std::span<const double> logits, std::size_t label,
                                std::optional<std::span<const double>> weights = std::nullopt);

// Mean per-pixel binary cross-entropy of a mask prediction; target entries
// are 0 or 1.
LossValue mask_bce(std::span<const double> pred, std::span<const int> target);

// Sum of smooth L1 over the four deltas of every positive anchor, divided
// by the number of positives (0 when there are none). Gradient is w.r.t.
// the predicted deltas laid out as [dx, dy, dw, dh] per anchor.
LossValue box_regression_loss(std::span<const BoxDeltas> predicted, std::span<const BoxDeltas> target,
                              std::span<const char> positive);

// Class-agnostic anchor-refinement loss: mean binary cross-entropy of the
// objectness plus the positive-normalised box regression term.
double anchor_refinement_loss(std::span<const double> objectness, std::span<const int> labels,
                              std::span<const BoxDeltas> predicted, std::span<const BoxDeltas> target);

// Per-class inverse-frequency weights N / (C * n_c), C counting the classes
// that have samples, so the mean weight per sample is 1. Classes with no
// samples get weight 0.
std::vector<double> inverse_frequency_weights(std::span<const std::size_t> class_counts);

// Stage 1: rpn + ar + det. Stage 2: det + mask. Stage 3: rpn + ar + det + mt.
// Optional coefficients default to 1. Throws std::invalid_argument naming
// the first missing component, or on an unknown stage.
double compose_stage_loss(int stage, const std::map<std::string, double>& components,
                          const std::map<std::string, double>& coefficients = {});

std::vector<std::string> stage_components(int stage);

}  // namespace brandnet::losses
