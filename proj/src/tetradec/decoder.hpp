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
#ifndef TETRADEC_DECODER_HPP_
#define TETRADEC_DECODER_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include "tetradec/geometry.hpp"
#include "tetradec/gt_encoder.hpp"
#include "tetradec/network_output.hpp"

namespace tetradec {

enum class ScoreSign {
  // mean heat minus the mean squared embedding deviation
  kSubtractPull,
  // the deviation term added, as the scoring formula is printed
  kAddPull,
};

enum class GroupingMode {
  // Every tl x tr x bl x br combination per class; k^4 work.
  kExhaustive,
  // Each tl candidate is completed with the geometrically compatible
  // candidate of every other type whose embedding is closest to its own.
  // O(k^2) per class, for large k.
  kGreedyAnchor,
};

struct DecodeConfig {
  uint32_t k = 20;
  float heat_floor = 0.1f;
  float embed_tol = 0.5f;
  float det_nms_iou = 0.5f;
  ScoreSign score_sign = ScoreSign::kSubtractPull;
  int nms_window = 3;
  GroupingMode grouping = GroupingMode::kExhaustive;

  void validate() const;
};

struct CornerCandidate {
  CornerType corner_type = CornerType::kTL;
  uint16_t class_id = 0;
  Cell cell;
  float heat = 0.0f;
  float embedding = 0.0f;
  // (cell + offset) * stride, image pixels.
  Point2 refined;

  friend bool operator==(const CornerCandidate&, const CornerCandidate&) = default;
};

// lists[type][class] holds the candidates of one heat plane in top-k order.
struct CornerCandidates {
  std::array<std::vector<std::vector<CornerCandidate>>, 4> lists;

  size_t num_classes() const { return lists[0].size(); }
  size_t total() const;
};

struct Detection {
  uint16_t class_id = 0;
  Tetragon tetragon;
  // Indexed by CornerType: tl, tr, bl, br.
  std::array<CornerCandidate, 4> corners;
  float score = 0.0f;
  float mean_embedding = 0.0f;

  friend bool operator==(const Detection&, const Detection&) = default;
};

CornerCandidates extract_corners(const NetworkOutput& out,
                                 const DecodeConfig& cfg = {});

// Score of one corner quadruple: mean heat combined with the mean squared
// deviation of the four embeddings from their average.
float quadruple_score(const std::array<CornerCandidate, 4>& q, ScoreSign sign,
                      float* mean_embedding = nullptr);

std::vector<Detection> group_and_score(const CornerCandidates& cands,
                                       const DecodeConfig& cfg = {});

std::vector<Detection> decode(const NetworkOutput& out,
                              const DecodeConfig& cfg = {});

}  // namespace tetradec

#endif  // TETRADEC_DECODER_HPP_
