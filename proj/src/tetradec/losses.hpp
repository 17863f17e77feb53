// Copyright 2026 The TetraDec Authors. All Rights Reserved.
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
#ifndef TETRADEC_LOSSES_HPP_
#define TETRADEC_LOSSES_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tetradec/gt_encoder.hpp"
#include "tetradec/network_output.hpp"
#include "tetradec/tensor.hpp"

namespace tetradec {

struct LossWeights {
  float w_off = 1.0f;
  float w_pull = 0.1f;
  float w_push = 0.1f;
  float alpha = 2.0f;
  float beta = 4.0f;
};

struct LossBreakdown {
  double total = 0.0;
  double det = 0.0;
  double off = 0.0;
  double pull = 0.0;
  double push = 0.0;
};

// Predictions are clamped to [eps, 1 - eps] before taking logs.
inline constexpr double kProbEpsilon = 1e-7;

// All loss functions accumulate in double with a fixed sequential order. When
// `grad` is non-null it is resized to the input tensor's size and receives
// d(loss)/d(input).

// Penalty-reduced focal loss over 4 x C x Hf x Wf heat maps, normalized by
// max(1, object count).
double detection_loss(const Tensor& pred_heat, const TargetMaps& gt,
                      float alpha = 2.0f, float beta = 4.0f,
                      std::vector<double>* grad = nullptr);

// Smooth-L1 on the 4N ground-truth corner cells, averaged over 4N.
double offset_loss(const Tensor& pred_offset, const TargetMaps& gt,
                   std::vector<double>* grad = nullptr);

// Mean over objects of the squared deviations of the four corner embeddings
// from their object mean. Zero without objects.
double pull_loss(const Tensor& embed, std::span<const ObjectCorners> objects,
                 std::vector<double>* grad = nullptr);

// Hinge max(0, 1 - |e(k) - e(j)|) over ordered pairs of distinct objects,
// divided by N(N - 1). Zero for fewer than two objects.
double push_loss(const Tensor& embed, std::span<const ObjectCorners> objects,
                 std::vector<double>* grad = nullptr);

LossBreakdown total_loss(const NetworkOutput& pred, const TargetMaps& gt,
                         const LossWeights& w = {});

enum class LossComponent { kDetection, kOffset, kPull, kPush, kTotal };

const char* loss_component_name(LossComponent c);

struct GradCheckInputs {
  NetworkOutput pred;
  TargetMaps gt;
  LossWeights weights;
};

// Random small problem: 2 objects on an 8 x 8 feature map, heat in
// [0.1, 0.9], offsets and embeddings kept away from loss kinks.
GradCheckInputs random_gradcheck_inputs(uint64_t seed,
                                        uint16_t num_classes = 1);

// Max over every input coordinate of
// |analytic - central difference| / max(1e-8, |central difference|).
double gradient_check(LossComponent component, const GradCheckInputs& inputs,
                      double h = 1e-3);

}  // namespace tetradec

#endif  // TETRADEC_LOSSES_HPP_
