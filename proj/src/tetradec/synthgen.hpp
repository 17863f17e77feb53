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
#ifndef TETRADEC_SYNTHGEN_HPP_
#define TETRADEC_SYNTHGEN_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "tetradec/gt_encoder.hpp"
#include "tetradec/network_output.hpp"

namespace tetradec {

struct SceneConfig {
  uint32_t img_w = 512;
  uint32_t img_h = 512;
  uint32_t min_objects = 1;
  uint32_t max_objects = 6;
  // Corner jitter as a fraction of the rectangle's width/height, in [0, 0.3].
  float warp_strength = 0.2f;
  float min_area = 400.0f;
  // Longest rectangle side as a fraction of the image side.
  float max_side_fraction = 0.3f;
  // Minimum gap between object bounding boxes, pixels.
  float min_gap = 8.0f;
  uint16_t num_classes = 1;
  uint64_t seed = 0;

  void validate() const;
};

struct NoiseConfig {
  float heat_sigma = 0.0f;
  float embed_sigma = 0.0f;
  float offset_sigma = 0.0f;
  uint32_t n_distractor_peaks = 0;
  uint64_t seed = 0;
};

// Axis-aligned rectangles with independently jittered corners (a bounded
// perspective warp), rejection-sampled until valid, inside the image,
// above min_area and separated by min_gap. Throws ConfigInfeasible after 1000
// rejections within one scene.
std::vector<Annotation> generate_scene(const SceneConfig& cfg);

struct SyntheticImage {
  std::string id;
  uint32_t width = 0;
  uint32_t height = 0;
  std::vector<Annotation> objects;
};

// Scene i uses seed derive_seed(cfg.seed, i) and id "img_%06d".
std::vector<SyntheticImage> generate_dataset(const SceneConfig& cfg,
                                             uint32_t num_images);

// Simulated network maps: encoded ground truth plus clamped Gaussian heat
// noise and distractor blobs; object k's corners carry embedding k * 1.5 plus
// noise while the background is uniform in [-10, 10]; offsets are the ground
// truth plus noise. All-zero noise reproduces the encoded heat and offsets.
NetworkOutput simulate_output(const std::vector<Annotation>& anns,
                              const NoiseConfig& noise, uint16_t num_classes,
                              uint32_t img_w, uint32_t img_h,
                              uint32_t stride = kDefaultStride);

}  // namespace tetradec

#endif  // TETRADEC_SYNTHGEN_HPP_
