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
// Independent reference implementations used as test oracles. None of these
// call into the geometry or evaluation code they are meant to check.

#ifndef TETRADEC_TESTS_ORACLES_HPP_
#define TETRADEC_TESTS_ORACLES_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "tetradec/evalkit.hpp"
#include "tetradec/geometry.hpp"
#include "tetradec/rng.hpp"

namespace tetradec::oracle {

using Quad = std::array<Point2, 4>;  // boundary order tl, tr, br, bl

inline Quad boundary(const Tetragon& t) { return {t.tl, t.tr, t.br, t.bl}; }

// Even-odd crossings of the horizontal line y with the quad's edges.
inline std::vector<double> crossings(const Quad& q, double y) {
  std::vector<double> xs;
  for (int i = 0; i < 4; ++i) {
    const Point2 a = q[i];
    const Point2 b = q[(i + 1) % 4];
    if ((a.y <= y) == (b.y <= y)) continue;
    xs.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
  }
  std::sort(xs.begin(), xs.end());
  return xs;
}

// Number of sample columns x = (i + 0.5) * h with lo <= x < hi.
inline int64_t samples_in(double lo, double hi, double h) {
  const auto first = static_cast<int64_t>(std::ceil(lo / h - 0.5));
  const auto last = static_cast<int64_t>(std::ceil(hi / h - 0.5));
  return std::max<int64_t>(0, last - first);
}

struct RasterCounts {
  double area_a = 0.0;
  double area_b = 0.0;
  double inter = 0.0;
  double iou() const {
    const double uni = area_a + area_b - inter;
    return uni > 0.0 ? inter / uni : 0.0;
  }
};

// Supersampled rasterization of two quads at `factor` samples per pixel
// along each axis.
inline RasterCounts raster(const Tetragon& ta, const Tetragon& tb, int factor) {
  const Quad a = boundary(ta), b = boundary(tb);
  double y0 = a[0].y, y1 = a[0].y;
  for (const Quad* q : {&a, &b}) {
    for (const Point2& p : *q) {
      y0 = std::min<double>(y0, p.y);
      y1 = std::max<double>(y1, p.y);
    }
  }
  const double h = 1.0 / factor;
  int64_t na = 0, nb = 0, ni = 0;
  for (auto r = static_cast<int64_t>(std::floor(y0 / h)); (r + 0.5) * h < y1 + h; ++r) {
    const double y = (r + 0.5) * h;
    const std::vector<double> xa = crossings(a, y), xb = crossings(b, y);
    for (size_t i = 0; i + 1 < xa.size(); i += 2) na += samples_in(xa[i], xa[i + 1], h);
    for (size_t i = 0; i + 1 < xb.size(); i += 2) nb += samples_in(xb[i], xb[i + 1], h);
    for (size_t i = 0; i + 1 < xa.size(); i += 2) {
      for (size_t j = 0; j + 1 < xb.size(); j += 2) {
        const double lo = std::max(xa[i], xb[j]);
        const double hi = std::min(xa[i + 1], xb[j + 1]);
        if (hi > lo) ni += samples_in(lo, hi, h);
      }
    }
  }
  const double cell = h * h;
  return {na * cell, nb * cell, ni * cell};
}

inline double raster_area(const Tetragon& t, int factor) {
  return raster(t, t, factor).area_a;
}

inline double cross(Point2 o, Point2 a, Point2 b) {
  return (double{a.x} - o.x) * (double{b.y} - o.y) - (double{a.y} - o.y) * (double{b.x} - o.x);
}

// True when the closed segments pq and rs share a point.
inline bool segments_meet(Point2 p, Point2 q, Point2 r, Point2 s) {
  const double d1 = cross(p, q, r), d2 = cross(p, q, s);
  const double d3 = cross(r, s, p), d4 = cross(r, s, q);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  auto on = [](Point2 a, Point2 b, Point2 c) {
    return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= c.y && c.y <= std::max(a.y, b.y);
  };
  return (d1 == 0 && on(p, q, r)) || (d2 == 0 && on(p, q, s)) ||
         (d3 == 0 && on(r, s, p)) || (d4 == 0 && on(r, s, q));
}

// Validity from first principles: ordering, non-adjacent edges disjoint,
// positive shoelace area in the tl, tr, br, bl order.
inline bool valid(const Tetragon& t) {
  if (!(t.tl.x < t.tr.x && t.bl.x < t.br.x && t.tl.y < t.bl.y && t.tr.y < t.br.y)) {
    return false;
  }
  const Quad q = boundary(t);
  if (segments_meet(q[0], q[1], q[2], q[3]) || segments_meet(q[1], q[2], q[3], q[0])) {
    return false;
  }
  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    s += double{q[i].x} * q[(i + 1) % 4].y - double{q[(i + 1) % 4].x} * q[i].y;
  }
  return s > 0.0;
}

// A random valid tetragon around (cx, cy) with half-extent about `half`.
inline Tetragon random_tetragon(Rng& rng, double cx, double cy, double half,
                                double jitter = 0.35) {
  for (;;) {
    const double hw = half * rng.uniform(0.5, 1.0);
    const double hh = half * rng.uniform(0.5, 1.0);
    auto j = [&](double s) { return s * jitter * rng.uniform(-1.0, 1.0); };
    Tetragon t{{float(cx - hw + j(hw)), float(cy - hh + j(hh))},
               {float(cx + hw + j(hw)), float(cy - hh + j(hh))},
               {float(cx - hw + j(hw)), float(cy + hh + j(hh))},
               {float(cx + hw + j(hw)), float(cy + hh + j(hh))}};
    if (valid(t)) return t;
  }
}

// Brute-force interpolated AP: for every recall level take the best
// precision among all ranks that reach it.
inline double reference_ap(const std::vector<std::pair<float, bool>>& ranked, size_t num_gt) {
  if (num_gt == 0) return 0.0;
  const size_t n = ranked.size();
  std::vector<double> precision(n), recall(n);
  for (size_t i = 0; i < n; ++i) {
    size_t tp = 0;
    for (size_t j = 0; j <= i; ++j) tp += ranked[j].second ? 1 : 0;
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
    recall[i] = static_cast<double>(tp) / static_cast<double>(num_gt);
  }
  double sum = 0.0;
  for (int r = 0; r <= 100; ++r) {
    const double level = r / 100.0;
    double best = 0.0;
    for (size_t j = 0; j < n; ++j) {
      if (recall[j] >= level) best = std::max(best, precision[j]);
    }
    sum += best;
  }
  return sum / 101.0;
}

// Exhaustive reference: greedy matching per image, then a global ranking and
// the brute-force interpolated AP per class, averaged over classes with GT
// and then over thresholds.
inline double reference_mean_ap(const std::vector<ImageEval>& images,
                                const std::vector<double>& thresholds) {
  double total = 0.0;
  for (double thr : thresholds) {
    std::map<uint16_t, std::vector<std::pair<float, bool>>> ranked;
    std::map<uint16_t, size_t> num_gt;
    for (const ImageEval& img : images) {
      for (const Annotation& g : img.ground_truth) ++num_gt[g.class_id];
      std::vector<size_t> order(img.detections.size());
      std::iota(order.begin(), order.end(), size_t{0});
      std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return img.detections[a].score > img.detections[b].score;
      });
      std::vector<bool> taken(img.ground_truth.size(), false);
      for (size_t idx : order) {
        const Detection& d = img.detections[idx];
        int best = -1;
        double best_iou = -1.0;
        for (size_t g = 0; g < img.ground_truth.size(); ++g) {
          if (taken[g] || img.ground_truth[g].class_id != d.class_id) continue;
          const double iou = tetragon_iou(d.tetragon, img.ground_truth[g].tetragon);
          if (iou >= thr && iou > best_iou) {
            best = static_cast<int>(g);
            best_iou = iou;
          }
        }
        if (best >= 0) taken[best] = true;
        ranked[d.class_id].push_back({d.score, best >= 0});
      }
    }
    double sum = 0.0;
    size_t classes = 0;
    for (const auto& [cls, n] : num_gt) {
      auto list = ranked[cls];
      std::stable_sort(list.begin(), list.end(),
                       [](const auto& a, const auto& b) { return a.first > b.first; });
      sum += reference_ap(list, n);
      ++classes;
    }
    total += classes ? sum / classes : 0.0;
  }
  return total / thresholds.size();
}

// 1 to 4 images, two classes, at most `max_dets` detections in total,
// mostly perturbed copies of ground truth and with tied scores.
inline std::vector<ImageEval> random_eval_instance(uint64_t seed, size_t max_dets) {
  Rng rng(seed);
  std::vector<ImageEval> images(rng.uniform_int(1, 4));
  size_t budget = max_dets;
  for (ImageEval& img : images) {
    const auto n_gt = rng.uniform_int(0, 4);
    for (int64_t g = 0; g < n_gt; ++g) {
      img.ground_truth.push_back({static_cast<uint16_t>(rng.uniform_int(0, 1)),
                                  random_tetragon(rng, rng.uniform(30, 200),
                                                          rng.uniform(30, 200), 25)});
    }
    const auto n_det = std::min<int64_t>(rng.uniform_int(0, 8), static_cast<int64_t>(budget));
    budget -= static_cast<size_t>(n_det);
    for (int64_t d = 0; d < n_det; ++d) {
      Tetragon t;
      if (!img.ground_truth.empty() && rng.uniform() < 0.7) {
        const auto& g = img.ground_truth[rng.uniform_int(0, img.ground_truth.size() - 1)];
        t = g.tetragon;
        const float dx = float(rng.uniform(-8, 8)), dy = float(rng.uniform(-8, 8));
        for (CornerType c : kCornerTypes) {
          t.corner(c).x += dx;
          t.corner(c).y += dy;
        }
      } else {
        t = random_tetragon(rng, rng.uniform(30, 200), rng.uniform(30, 200), 25);
      }
      // Coarse scores so ties occur.
      const float score = static_cast<float>(rng.uniform_int(1, 6)) / 6.0f;
      Detection det;
      det.class_id = static_cast<uint16_t>(rng.uniform_int(0, 1));
      det.tetragon = t;
      det.score = score;
      img.detections.push_back(det);
    }
  }
  return images;
}

}  // namespace tetradec::oracle

#endif  // TETRADEC_TESTS_ORACLES_HPP_
