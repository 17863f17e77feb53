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
#ifndef TETRADEC_GT_ENCODER_HPP_
#define TETRADEC_GT_ENCODER_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include "tetradec/geometry.hpp"
#include "tetradec/tensor.hpp"

namespace tetradec {

struct Annotation {
  uint16_t class_id = 0;
  Tetragon tetragon;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct Cell {
  uint32_t row = 0;
  uint32_t col = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
};

// Feature-map positions of one object's four corners, indexed by CornerType.
struct ObjectCorners {
  uint16_t class_id = 0;
  std::array<Cell, 4> cells{};
  // Sub-cell remainder (dx, dy) of each corner, in [0, 1).
  std::array<Point2, 4> subpixel{};
};

// heat: 4 x C x Hf x Wf, offset: 4 x 2 x Hf x Wf (channel 0 = x, 1 = y).
struct TargetMaps {
  Tensor heat;
  Tensor offset;
  std::vector<ObjectCorners> objects;
  uint32_t stride = 4;

  size_t num_classes() const { return heat.dim(1); }
  size_t height() const { return heat.dim(2); }
  size_t width() const { return heat.dim(3); }
};

inline constexpr uint32_t kDefaultStride = 4;

// Gaussian radius in feature cells: 5% of the bounding-box side length at
// feature scale, clamped to [2, 15].
uint32_t gaussian_radius(const Tetragon& t, uint32_t stride);

// Feature-map extent for an image dimension: ceil(dim / stride).
uint32_t feature_extent(uint32_t image_dim, uint32_t stride);

// Throws InvalidAnnotation unless the tetragon is valid, the class is in
// range and every corner satisfies 0 <= x < img_w, 0 <= y < img_h.
void validate_annotation(const Annotation& ann, uint16_t num_classes,
                         uint32_t img_w, uint32_t img_h);

TargetMaps encode_targets(const std::vector<Annotation>& anns,
                          uint16_t num_classes, uint32_t img_w, uint32_t img_h,
                          uint32_t stride = kDefaultStride);

// Embedding assigned to object k. Larger than the push margin of 1 so that
// noise-free objects never interact.
inline constexpr float kEmbeddingSpacing = 1.5f;

// 4 x Hf x Wf map holding k * kEmbeddingSpacing at the corner cells of
// object k and zero elsewhere. Together with the heat and offset targets it
// forms an ideal network output.
Tensor target_embedding(const TargetMaps& maps);

// Max-combines exp(-d^2 / (2 sigma^2)), sigma = radius / 3, into one H x W
// plane over the (2r+1)^2 window clipped to the plane.
void draw_gaussian(std::span<float> plane, size_t height, size_t width,
                   Cell center, uint32_t radius, float peak = 1.0f);

}  // namespace tetradec

#endif  // TETRADEC_GT_ENCODER_HPP_
