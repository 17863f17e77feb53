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
#include "tetradec/gt_encoder.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tetradec/error.hpp"

namespace tetradec {

uint32_t gaussian_radius(const Tetragon& t, uint32_t stride) {
  const BoundingBox box = bounding_box(t);
  const double s = static_cast<double>(stride);
  const double r = std::round(0.05 * std::sqrt(box.area() / (s * s)));
  return static_cast<uint32_t>(std::clamp(r, 2.0, 15.0));
}

uint32_t feature_extent(uint32_t image_dim, uint32_t stride) {
  return (image_dim + stride - 1) / stride;
}

void validate_annotation(const Annotation& ann, uint16_t num_classes,
                         uint32_t img_w, uint32_t img_h) {
  if (ann.class_id >= num_classes) {
    throw Error(ErrorCode::kInvalidAnnotation,
                "class " + std::to_string(ann.class_id) + " >= num_classes " +
                    std::to_string(num_classes));
  }
  if (!is_valid(ann.tetragon)) {
    throw Error(ErrorCode::kInvalidAnnotation, "invalid tetragon");
  }
  for (CornerType type : kCornerTypes) {
    const Point2& p = ann.tetragon.corner(type);
    if (!(p.x >= 0 && p.y >= 0 && p.x < img_w && p.y < img_h)) {
      throw Error(ErrorCode::kInvalidAnnotation,
                  std::string("corner ") + corner_name(type) +
                      " lies outside the image");
    }
  }
}

void draw_gaussian(std::span<float> plane, size_t height, size_t width,
                   Cell center, uint32_t radius, float peak) {
  const double sigma = radius / 3.0;
  const double denom = 2.0 * sigma * sigma;
  const int64_t r = radius;
  const int64_t cy = center.row, cx = center.col;
  const int64_t h = static_cast<int64_t>(height), w = static_cast<int64_t>(width);
  for (int64_t dy = -r; dy <= r; ++dy) {
    const int64_t y = cy + dy;
    if (y < 0 || y >= h) continue;
    for (int64_t dx = -r; dx <= r; ++dx) {
      const int64_t x = cx + dx;
      if (x < 0 || x >= w) continue;
      const float g = static_cast<float>(
          peak * std::exp(-static_cast<double>(dx * dx + dy * dy) / denom));
      float& cell = plane[y * w + x];
      cell = std::max(cell, g);
    }
  }
}

TargetMaps encode_targets(const std::vector<Annotation>& anns,
                          uint16_t num_classes, uint32_t img_w, uint32_t img_h,
                          uint32_t stride) {
  if (stride < 1) throw Error(ErrorCode::kInvalidArgument, "stride must be >= 1");
  if (num_classes < 1) {
    throw Error(ErrorCode::kInvalidArgument, "num_classes must be >= 1");
  }
  const size_t hf = feature_extent(img_h, stride);
  const size_t wf = feature_extent(img_w, stride);
  TargetMaps maps;
  maps.stride = stride;
  maps.heat = Tensor({4, num_classes, hf, wf});
  maps.offset = Tensor({4, 2, hf, wf});
  maps.objects.reserve(anns.size());

  const size_t plane = hf * wf;
  for (const Annotation& ann : anns) {
    validate_annotation(ann, num_classes, img_w, img_h);
    const uint32_t radius = gaussian_radius(ann.tetragon, stride);
    ObjectCorners obj;
    obj.class_id = ann.class_id;
    for (CornerType type : kCornerTypes) {
      const int t = index_of(type);
      const Point2& p = ann.tetragon.corner(type);
      const float fx = p.x / static_cast<float>(stride);
      const float fy = p.y / static_cast<float>(stride);
      const Cell cell{static_cast<uint32_t>(std::floor(fy)),
                      static_cast<uint32_t>(std::floor(fx))};
      obj.cells[t] = cell;
      obj.subpixel[t] = {fx - static_cast<float>(cell.col),
                         fy - static_cast<float>(cell.row)};

      std::span<float> heat_plane =
          maps.heat.data().subspan((t * num_classes + ann.class_id) * plane, plane);
      draw_gaussian(heat_plane, hf, wf, cell, radius);
      heat_plane[cell.row * wf + cell.col] = 1.0f;

      maps.offset[(t * 2 + 0) * plane + cell.row * wf + cell.col] =
          obj.subpixel[t].x;
      maps.offset[(t * 2 + 1) * plane + cell.row * wf + cell.col] =
          obj.subpixel[t].y;
    }
    maps.objects.push_back(obj);
  }
  return maps;
}

Tensor target_embedding(const TargetMaps& maps) {
  const size_t h = maps.height(), w = maps.width();
  Tensor embed({4, h, w});
  for (size_t k = 0; k < maps.objects.size(); ++k) {
    for (int t = 0; t < 4; ++t) {
      const Cell& c = maps.objects[k].cells[t];
      embed[(t * h + c.row) * w + c.col] = static_cast<float>(k) * kEmbeddingSpacing;
    }
  }
  return embed;
}

}  // namespace tetradec
