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
#include "tetradec/mask_fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "tetradec/error.hpp"

namespace tetradec {

namespace {

// Sorted x crossings of the boundary with the horizontal line at y.
int row_crossings(const std::array<Point2, 4>& poly, double y,
                  std::array<double, 4>& xs) {
  int n = 0;
  for (int i = 0, j = 3; i < 4; j = i++) {
    const double yi = poly[i].y, yj = poly[j].y;
    if ((yi > y) != (yj > y)) {
      xs[n++] = poly[i].x + (y - yi) * (poly[j].x - poly[i].x) / (yj - yi);
    }
  }
  std::sort(xs.begin(), xs.begin() + n);
  return n;
}

// Pixel columns whose centers fall in [xa, xb).
inline int64_t first_col(double xa) {
  return static_cast<int64_t>(std::ceil(xa - 0.5));
}

bool collinear(const std::vector<std::array<int64_t, 2>>& pts) {
  const auto& a = pts.front();
  size_t far = 0;
  for (size_t i = 1; i < pts.size(); ++i) {
    if (pts[i] != a) {
      far = i;
      break;
    }
  }
  if (far == 0) return true;
  const auto& b = pts[far];
  for (const auto& p : pts) {
    const int64_t c = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
    if (c != 0) return false;
  }
  return true;
}

}  // namespace

size_t BinaryMask::count() const {
  return static_cast<size_t>(std::count(bits.begin(), bits.end(), uint8_t{1}));
}

BinaryMask rasterize(const Tetragon& t, uint32_t width, uint32_t height) {
  BinaryMask mask(width, height);
  const auto poly = t.polygon();
  std::array<double, 4> xs{};
  for (uint32_t row = 0; row < height; ++row) {
    const int n = row_crossings(poly, row + 0.5, xs);
    for (int i = 0; i + 1 < n; i += 2) {
      const int64_t lo = std::max<int64_t>(0, first_col(xs[i]));
      const int64_t hi = std::min<int64_t>(width, first_col(xs[i + 1]));
      for (int64_t col = lo; col < hi; ++col) {
        mask.set(row, static_cast<uint32_t>(col));
      }
    }
  }
  return mask;
}

MaskIou::MaskIou(const BinaryMask& mask)
    : width_(mask.width),
      height_(mask.height),
      mask_count_(mask.count()),
      prefix_(size_t{mask.height} * (mask.width + 1), 0) {
  for (uint32_t row = 0; row < height_; ++row) {
    uint32_t* p = prefix_.data() + size_t{row} * (width_ + 1);
    for (uint32_t col = 0; col < width_; ++col) {
      p[col + 1] = p[col] + (mask.get(row, col) ? 1 : 0);
    }
  }
}

double MaskIou::operator()(const Tetragon& t) const {
  const auto poly = t.polygon();
  double ymin = poly[0].y, ymax = poly[0].y;
  for (const Point2& p : poly) {
    ymin = std::min<double>(ymin, p.y);
    ymax = std::max<double>(ymax, p.y);
  }
  const int64_t row_lo = static_cast<int64_t>(std::floor(ymin)) - 1;
  const int64_t row_hi = static_cast<int64_t>(std::ceil(ymax)) + 1;
  size_t inside = 0, inter = 0;
  std::array<double, 4> xs{};
  for (int64_t row = row_lo; row <= row_hi; ++row) {
    const int n = row_crossings(poly, row + 0.5, xs);
    const bool in_raster = row >= 0 && row < static_cast<int64_t>(height_);
    const uint32_t* p =
        in_raster ? prefix_.data() + static_cast<size_t>(row) * (width_ + 1) : nullptr;
    for (int i = 0; i + 1 < n; i += 2) {
      const int64_t lo = first_col(xs[i]);
      const int64_t hi = first_col(xs[i + 1]);
      if (hi <= lo) continue;
      inside += static_cast<size_t>(hi - lo);
      if (p) {
        const int64_t a = std::clamp<int64_t>(lo, 0, width_);
        const int64_t b = std::clamp<int64_t>(hi, 0, width_);
        if (b > a) inter += p[b] - p[a];
      }
    }
  }
  const size_t uni = mask_count_ + inside - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

FitResult fit_tetragon(const BinaryMask& mask, uint32_t max_rounds) {
  if (mask.bits.size() != size_t{mask.width} * mask.height) {
    throw Error(ErrorCode::kInvalidArgument, "mask buffer size mismatch");
  }
  std::vector<std::array<int64_t, 2>> pixels;
  for (uint32_t row = 0; row < mask.height; ++row) {
    for (uint32_t col = 0; col < mask.width; ++col) {
      if (mask.get(row, col)) pixels.push_back({col, row});
    }
  }
  if (pixels.empty()) throw Error(ErrorCode::kEmptyMask, "mask has no set pixels");
  if (pixels.size() < 4 || collinear(pixels)) {
    throw Error(ErrorCode::kDegenerateMask,
                "mask pixels are collinear or fewer than four");
  }

  // Extreme pixels along -x-y, x-y, -x+y, x+y; ties keep the first in scan
  // order. Each vertex takes the matching outer corner of its pixel.
  std::array<size_t, 4> best{0, 0, 0, 0};
  auto key = [&](int type, const std::array<int64_t, 2>& p) {
    switch (type) {
      case 0: return -p[0] - p[1];
      case 1: return p[0] - p[1];
      case 2: return -p[0] + p[1];
      default: return p[0] + p[1];
    }
  };
  for (size_t i = 1; i < pixels.size(); ++i) {
    for (int type = 0; type < 4; ++type) {
      if (key(type, pixels[i]) > key(type, pixels[best[type]])) best[type] = i;
    }
  }
  auto vertex = [&](int type, float dx, float dy) {
    const auto& p = pixels[best[type]];
    return Point2{static_cast<float>(p[0]) + dx, static_cast<float>(p[1]) + dy};
  };
  Tetragon current{vertex(0, 0, 0), vertex(1, 1, 0), vertex(2, 0, 1),
                   vertex(3, 1, 1)};
  if (!is_valid(current)) {
    int64_t x0 = pixels[0][0], x1 = x0, y0 = pixels[0][1], y1 = y0;
    for (const auto& p : pixels) {
      x0 = std::min(x0, p[0]);
      x1 = std::max(x1, p[0]);
      y0 = std::min(y0, p[1]);
      y1 = std::max(y1, p[1]);
    }
    const float l = static_cast<float>(x0), r = static_cast<float>(x1 + 1);
    const float t = static_cast<float>(y0), b = static_cast<float>(y1 + 1);
    current = {{l, t}, {r, t}, {l, b}, {r, b}};
  }

  const MaskIou iou_of(mask);
  FitResult result;
  result.initial = current;
  result.initial_iou = iou_of(current);
  result.trace.push_back(result.initial_iou);
  double best_iou = result.initial_iou;

  static constexpr std::array<CornerType, 4> kVertexOrder = {
      CornerType::kTL, CornerType::kTR, CornerType::kBR, CornerType::kBL};

  for (uint32_t round = 0; round < max_rounds; ++round) {
    bool round_improved = false;
    for (const float radius : kFitRadii) {
      // Whole-pixel offsets up to the radius; below one pixel the only
      // offsets are -radius, 0 and +radius per axis.
      const float step = std::min(radius, 1.0f);
      const int reach = static_cast<int>(std::lround(radius / step));
      for (CornerType v : kVertexOrder) {
        bool moved = true;
        while (moved) {
          moved = false;
          const Point2 origin = current.corner(v);
          for (int iy = -reach; iy <= reach && !moved; ++iy) {
            for (int ix = -reach; ix <= reach; ++ix) {
              if (ix == 0 && iy == 0) continue;
              Tetragon candidate = current;
              candidate.corner(v) = {origin.x + static_cast<float>(ix) * step,
                                     origin.y + static_cast<float>(iy) * step};
              if (!is_valid(candidate)) continue;
              const double score = iou_of(candidate);
              if (score > best_iou) {
                best_iou = score;
                current = candidate;
                result.trace.push_back(score);
                moved = true;
                round_improved = true;
                break;
              }
            }
          }
        }
      }
    }
    ++result.iterations;
    if (!round_improved) break;
  }
  result.tetragon = current;
  result.iou = best_iou;
  return result;
}

}  // namespace tetradec
