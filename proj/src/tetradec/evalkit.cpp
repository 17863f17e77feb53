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
#include "tetradec/evalkit.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <thread>

#include "tetradec/error.hpp"

namespace tetradec {

namespace {

std::vector<size_t> score_order(const std::vector<Detection>& dets) {
  std::vector<size_t> order(dets.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return dets[a].score > dets[b].score;
  });
  return order;
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Each index is handled
// by exactly one thread and results are written to per-index slots.
template <typename Fn>
void parallel_for(size_t n, unsigned jobs, Fn fn) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  if (jobs <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < jobs; ++j) {
    pool.emplace_back([&, j] {
      for (size_t i = j; i < n; i += jobs) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

std::vector<MatchResult> match_detections(const std::vector<Detection>& dets,
                                          const std::vector<Annotation>& gts,
                                          double iou_thr) {
  std::vector<MatchResult> result(dets.size());
  std::vector<bool> taken(gts.size(), false);
  for (size_t d = 0; d < dets.size(); ++d) {
    int best = -1;
    double best_iou = iou_thr;
    for (size_t g = 0; g < gts.size(); ++g) {
      if (taken[g] || gts[g].class_id != dets[d].class_id) continue;
      const double iou = tetragon_iou(dets[d].tetragon, gts[g].tetragon);
      if (iou >= best_iou && (best < 0 || iou > best_iou)) {
        best = static_cast<int>(g);
        best_iou = iou;
      }
    }
    if (best >= 0) {
      taken[best] = true;
      result[d] = {best, best_iou};
    }
  }
  return result;
}

MatchSet collect_matches(const std::vector<ImageEval>& images, double iou_thr,
                         unsigned jobs) {
  std::vector<std::vector<DetectionMatch>> per_image(images.size());
  parallel_for(images.size(), jobs, [&](size_t i) {
    const ImageEval& img = images[i];
    std::vector<Detection> sorted;
    sorted.reserve(img.detections.size());
    for (size_t idx : score_order(img.detections)) {
      sorted.push_back(img.detections[idx]);
    }
    const auto matches = match_detections(sorted, img.ground_truth, iou_thr);
    auto& out = per_image[i];
    for (size_t d = 0; d < sorted.size(); ++d) {
      out.push_back({sorted[d].class_id, sorted[d].score, matches[d].matched()});
    }
  });
  MatchSet set;
  set.threshold = iou_thr;
  for (size_t i = 0; i < images.size(); ++i) {
    set.detections.insert(set.detections.end(), per_image[i].begin(),
                          per_image[i].end());
    for (const Annotation& gt : images[i].ground_truth) ++set.num_gt[gt.class_id];
  }
  return set;
}

double interpolated_ap(const std::vector<DetectionMatch>& detections,
                       size_t num_gt) {
  if (num_gt == 0) return 0.0;
  std::vector<size_t> order(detections.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return detections[a].score > detections[b].score;
  });
  const size_t n = order.size();
  std::vector<double> precision(n), recall(n);
  size_t tp = 0, fp = 0;
  for (size_t i = 0; i < n; ++i) {
    if (detections[order[i]].true_positive) {
      ++tp;
    } else {
      ++fp;
    }
    precision[i] = static_cast<double>(tp) / static_cast<double>(tp + fp);
    recall[i] = static_cast<double>(tp) / static_cast<double>(num_gt);
  }
  // Precision envelope, non-increasing from the right.
  for (size_t i = n; i-- > 1;) {
    precision[i - 1] = std::max(precision[i - 1], precision[i]);
  }
  double sum = 0.0;
  for (int r = 0; r <= 100; ++r) {
    const double level = r / 100.0;
    const auto it = std::lower_bound(recall.begin(), recall.end(), level);
    if (it != recall.end()) sum += precision[it - recall.begin()];
  }
  return sum / 101.0;
}

EvalReport average_precision(const std::vector<MatchSet>& sets) {
  std::vector<MatchSet> sorted = sets;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const MatchSet& a, const MatchSet& b) {
                     return a.threshold < b.threshold;
                   });
  EvalReport report;
  for (const MatchSet& set : sorted) {
    std::map<uint16_t, std::vector<DetectionMatch>> by_class;
    for (const DetectionMatch& m : set.detections) by_class[m.class_id].push_back(m);
    double sum = 0.0;
    size_t classes = 0;
    for (const auto& [cls, count] : set.num_gt) {
      if (count == 0) continue;
      const double ap = interpolated_ap(by_class[cls], count);
      report.per_class[cls].push_back(ap);
      sum += ap;
      ++classes;
    }
    report.ap_at.emplace_back(set.threshold, classes ? sum / classes : 0.0);
  }
  if (!report.ap_at.empty()) {
    double sum = 0.0;
    for (const auto& [thr, ap] : report.ap_at) sum += ap;
    report.ap = sum / static_cast<double>(report.ap_at.size());
  }
  return report;
}

EvalReport evaluate(const std::vector<ImageEval>& images,
                    const std::vector<double>& thresholds, unsigned jobs) {
  std::vector<MatchSet> sets;
  sets.reserve(thresholds.size());
  for (double thr : thresholds) sets.push_back(collect_matches(images, thr, jobs));
  return average_precision(sets);
}

std::array<double, 2> usecase_assign(const std::vector<Detection>& dets,
                                     const std::vector<Annotation>& gts) {
  if (gts.size() != 2) {
    throw Error(ErrorCode::kBadGtCardinality,
                "use-case evaluation needs exactly 2 ground-truth sides, got " +
                    std::to_string(gts.size()));
  }
  std::vector<const Detection*> top;
  for (size_t idx : score_order(dets)) {
    if (top.size() == 2) break;
    top.push_back(&dets[idx]);
  }
  std::array<double, 2> ious{0.0, 0.0};
  if (top.size() == 2) {
    std::array<size_t, 2> gt_order{0, 1};
    if (centroid(gts[1].tetragon).x < centroid(gts[0].tetragon).x) {
      gt_order = {1, 0};
    }
    if (centroid(top[1]->tetragon).x < centroid(top[0]->tetragon).x) {
      std::swap(top[0], top[1]);
    }
    for (int i = 0; i < 2; ++i) {
      ious[gt_order[i]] = tetragon_iou(top[i]->tetragon, gts[gt_order[i]].tetragon);
    }
  } else if (top.size() == 1) {
    const double a = tetragon_iou(top[0]->tetragon, gts[0].tetragon);
    const double b = tetragon_iou(top[0]->tetragon, gts[1].tetragon);
    if (std::max(a, b) >= 0.5) {
      if (a >= b) {
        ious[0] = a;
      } else {
        ious[1] = b;
      }
    }
  }
  return ious;
}

UseCaseReport usecase_metrics(const std::vector<ImageEval>& images) {
  UseCaseReport report;
  double positive_sum = 0.0;
  for (const ImageEval& img : images) {
    for (double iou : usecase_assign(img.detections, img.ground_truth)) {
      ++report.num_sides;
      if (iou >= kUseCaseIou) {
        ++report.num_positive;
        positive_sum += iou;
      }
    }
  }
  if (report.num_sides > 0) {
    report.accuracy = static_cast<double>(report.num_positive) /
                      static_cast<double>(report.num_sides);
  }
  if (report.num_positive > 0) {
    report.mean_iou_positives = positive_sum / static_cast<double>(report.num_positive);
  }
  return report;
}

}  // namespace tetradec
