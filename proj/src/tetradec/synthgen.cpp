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
#include "tetradec/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "tetradec/error.hpp"
#include "tetradec/rng.hpp"

namespace tetradec {

namespace {

constexpr int kMaxRejections = 1000;

bool separated(const BoundingBox& a, const BoundingBox& b, double gap) {
  return a.x1 + gap <= b.x0 || b.x1 + gap <= a.x0 || a.y1 + gap <= b.y0 ||
         b.y1 + gap <= a.y0;
}

}  // namespace

void SceneConfig::validate() const {
  if (img_w < 8 || img_h < 8) {
    throw Error(ErrorCode::kInvalidArgument, "image must be at least 8x8");
  }
  if (min_objects > max_objects) {
    throw Error(ErrorCode::kInvalidArgument, "min_objects > max_objects");
  }
  if (!(warp_strength >= 0.0f && warp_strength <= 0.3f)) {
    throw Error(ErrorCode::kInvalidArgument, "warp_strength must lie in [0, 0.3]");
  }
  if (!(max_side_fraction > 0.0f && max_side_fraction <= 1.0f)) {
    throw Error(ErrorCode::kInvalidArgument, "max_side_fraction must lie in (0, 1]");
  }
  if (num_classes < 1) throw Error(ErrorCode::kInvalidArgument, "num_classes must be >= 1");
  if (min_area < 0.0f || min_gap < 0.0f) {
    throw Error(ErrorCode::kInvalidArgument, "min_area and min_gap must be >= 0");
  }
}

std::vector<Annotation> generate_scene(const SceneConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const auto n = static_cast<uint32_t>(
      rng.uniform_int(cfg.min_objects, cfg.max_objects));
  const double min_side = std::max(8.0, std::sqrt(static_cast<double>(cfg.min_area)));
  const double max_w = std::max(min_side, double{cfg.max_side_fraction} * cfg.img_w);
  const double max_h = std::max(min_side, double{cfg.max_side_fraction} * cfg.img_h);
  const double s = cfg.warp_strength;

  std::vector<Annotation> scene;
  std::vector<BoundingBox> boxes;
  int rejections = 0;
  while (scene.size() < n) {
    const double w = rng.uniform(min_side, max_w);
    const double h = rng.uniform(min_side, max_h);
    const double x0 = rng.uniform(1.0, std::max(1.0, cfg.img_w - w - 1.0));
    const double y0 = rng.uniform(1.0, std::max(1.0, cfg.img_h - h - 1.0));
    auto jitter = [&](double x, double y) {
      if (s > 0.0) {
        x += rng.uniform(-s, s) * w;
        y += rng.uniform(-s, s) * h;
      }
      return Point2{static_cast<float>(x), static_cast<float>(y)};
    };
    Annotation ann;
    ann.tetragon.tl = jitter(x0, y0);
    ann.tetragon.tr = jitter(x0 + w, y0);
    ann.tetragon.bl = jitter(x0, y0 + h);
    ann.tetragon.br = jitter(x0 + w, y0 + h);
    ann.class_id = static_cast<uint16_t>(rng.uniform_int(0, cfg.num_classes - 1));

    const Tetragon& t = ann.tetragon;
    bool ok = is_valid(t) && area(t) >= cfg.min_area;
    if (ok) {
      for (const Point2& p : t.polygon()) {
        ok = ok && p.x >= 0.0f && p.y >= 0.0f && p.x < cfg.img_w && p.y < cfg.img_h;
      }
    }
    const BoundingBox box = bounding_box(t);
    for (size_t i = 0; ok && i < boxes.size(); ++i) {
      ok = separated(box, boxes[i], cfg.min_gap);
    }
    if (!ok) {
      if (++rejections >= kMaxRejections) {
        throw Error(ErrorCode::kConfigInfeasible,
                    "scene generation gave up after 1000 rejections");
      }
      continue;
    }
    scene.push_back(ann);
    boxes.push_back(box);
  }
  return scene;
}

std::vector<SyntheticImage> generate_dataset(const SceneConfig& cfg,
                                             uint32_t num_images) {
  std::vector<SyntheticImage> images;
  images.reserve(num_images);
  for (uint32_t i = 0; i < num_images; ++i) {
    SceneConfig scene_cfg = cfg;
    scene_cfg.seed = Rng::derive_seed(cfg.seed, i);
    char id[32];
    std::snprintf(id, sizeof(id), "img_%06u", i);
    images.push_back({id, cfg.img_w, cfg.img_h, generate_scene(scene_cfg)});
  }
  return images;
}

NetworkOutput simulate_output(const std::vector<Annotation>& anns,
                              const NoiseConfig& noise, uint16_t num_classes,
                              uint32_t img_w, uint32_t img_h, uint32_t stride) {
  if (noise.heat_sigma < 0 || noise.embed_sigma < 0 || noise.offset_sigma < 0) {
    throw Error(ErrorCode::kInvalidArgument, "noise sigmas must be >= 0");
  }
  TargetMaps gt = encode_targets(anns, num_classes, img_w, img_h, stride);
  Rng rng(noise.seed);
  const size_t h = gt.height(), w = gt.width(), plane = h * w;

  NetworkOutput out;
  out.stride = stride;
  out.heat = std::move(gt.heat);
  if (noise.heat_sigma > 0) {
    for (float& v : out.heat.values()) {
      v = static_cast<float>(
          std::clamp(v + noise.heat_sigma * rng.normal(), 0.0, 1.0));
    }
  }
  for (uint32_t i = 0; i < noise.n_distractor_peaks; ++i) {
    const auto type = rng.uniform_int(0, 3);
    const auto cls = rng.uniform_int(0, num_classes - 1);
    const Cell cell{static_cast<uint32_t>(rng.uniform_int(0, h - 1)),
                    static_cast<uint32_t>(rng.uniform_int(0, w - 1))};
    const float peak = static_cast<float>(rng.uniform(0.2, 0.6));
    draw_gaussian(out.heat.data().subspan((type * num_classes + cls) * plane, plane),
                  h, w, cell, 2, peak);
  }

  out.embed = Tensor({4, h, w});
  for (float& v : out.embed.values()) v = static_cast<float>(rng.uniform(-10.0, 10.0));
  for (size_t k = 0; k < gt.objects.size(); ++k) {
    for (int t = 0; t < 4; ++t) {
      const Cell& c = gt.objects[k].cells[t];
      double e = static_cast<double>(k) * kEmbeddingSpacing;
      if (noise.embed_sigma > 0) e += noise.embed_sigma * rng.normal();
      out.embed[t * plane + c.row * w + c.col] = static_cast<float>(e);
    }
  }

  out.offset = std::move(gt.offset);
  if (noise.offset_sigma > 0) {
    for (float& v : out.offset.values()) {
      v = static_cast<float>(v + noise.offset_sigma * rng.normal());
    }
  }
  return out;
}

}  // namespace tetradec
