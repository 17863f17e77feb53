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
#ifndef TETRADEC_EVALKIT_HPP_
#define TETRADEC_EVALKIT_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "tetradec/decoder.hpp"
#include "tetradec/gt_encoder.hpp"

namespace tetradec {

// 0.50, 0.55, ..., 0.95, each the double nearest to the decimal value.
inline constexpr std::array<double, 10> kCocoIouThresholds = {
    0.50, 0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95};

struct ImageEval {
  std::vector<Detection> detections;
  std::vector<Annotation> ground_truth;
};

// Per detection, in input order.
struct MatchResult {
  int gt_index = -1;
  double iou = 0.0;

  bool matched() const { return gt_index >= 0; }
};

// Greedy COCO matching for one image. Detections must be score-sorted; each
// takes the unmatched same-class ground truth of highest IoU >= iou_thr.
std::vector<MatchResult> match_detections(const std::vector<Detection>& dets,
                                          const std::vector<Annotation>& gts,
                                          double iou_thr);

struct DetectionMatch {
  uint16_t class_id = 0;
  float score = 0.0f;
  bool true_positive = false;
};

// All detections of a dataset at one threshold, in image order and score
// order within each image.
struct MatchSet {
  double threshold = 0.5;
  std::vector<DetectionMatch> detections;
  std::map<uint16_t, size_t> num_gt;
};

MatchSet collect_matches(const std::vector<ImageEval>& images, double iou_thr,
                         unsigned jobs = 1);

// 101-point interpolated AP of one class. Detections are ranked by score,
// ties kept in input order. Zero when there is no ground truth.
double interpolated_ap(const std::vector<DetectionMatch>& detections,
                       size_t num_gt);

struct EvalReport {
  // Mean of ap_at.
  double ap = 0.0;
  // One entry per threshold, ascending.
  std::vector<std::pair<double, double>> ap_at;
  // class -> AP per threshold (same order as ap_at); classes with ground
  // truth only.
  std::map<uint16_t, std::vector<double>> per_class;
};

// Per threshold: mean over classes with ground truth of the per-class AP.
EvalReport average_precision(const std::vector<MatchSet>& sets);

EvalReport evaluate(const std::vector<ImageEval>& images,
                    const std::vector<double>& thresholds =
                        {kCocoIouThresholds.begin(), kCocoIouThresholds.end()},
                    unsigned jobs = 1);

struct UseCaseReport {
  // Share of ground-truth sides whose assigned detection reaches IoU 0.8.
  double accuracy = 0.0;
  // Mean IoU over those sides; absent when there are none.
  std::optional<double> mean_iou_positives;
  size_t num_sides = 0;
  size_t num_positive = 0;
};

inline constexpr double kUseCaseIou = 0.8;

// IoU of each of the two ground-truth sides with its assigned detection,
// indexed like `gts`. The two best-scoring detections are paired with the
// sides left to right by centroid x; with a single detection it goes to the
// side it overlaps best if that IoU is at least 0.5. Class ids are ignored.
// Throws BadGtCardinality unless gts has exactly two entries.
std::array<double, 2> usecase_assign(const std::vector<Detection>& dets,
                                     const std::vector<Annotation>& gts);

UseCaseReport usecase_metrics(const std::vector<ImageEval>& images);

}  // namespace tetradec

#endif  // TETRADEC_EVALKIT_HPP_
