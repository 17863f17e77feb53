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
#ifndef TETRADEC_GEOMETRY_HPP_
#define TETRADEC_GEOMETRY_HPP_

#include <array>
#include <cstdint>
#include <vector>

namespace tetradec {

// Image coordinates: origin top-left, y grows downward, sub-pixel positions
// allowed.
struct Point2 {
  float x = 0.0f;
  float y = 0.0f;

  friend bool operator==(const Point2&, const Point2&) = default;
};

enum class CornerType : uint8_t { kTL = 0, kTR = 1, kBL = 2, kBR = 3 };

inline constexpr std::array<CornerType, 4> kCornerTypes = {
    CornerType::kTL, CornerType::kTR, CornerType::kBL, CornerType::kBR};

inline constexpr int index_of(CornerType t) { return static_cast<int>(t); }
const char* corner_name(CornerType t);

// Four named vertices. The polygon boundary runs tl -> tr -> br -> bl.
struct Tetragon {
  Point2 tl, tr, bl, br;

  const Point2& corner(CornerType t) const;
  Point2& corner(CornerType t);
  // Vertices in boundary order.
  std::array<Point2, 4> polygon() const { return {tl, tr, br, bl}; }

  friend bool operator==(const Tetragon&, const Tetragon&) = default;
};

struct BoundingBox {
  double x0, y0, x1, y1;
  double area() const { return (x1 - x0) * (y1 - y0); }
};

// Ordering (right corners right of their left counterparts, bottom corners
// below their top counterparts), simple boundary, positive area.
bool is_valid(const Point2& tl, const Point2& tr, const Point2& bl,
              const Point2& br);
inline bool is_valid(const Tetragon& t) {
  return is_valid(t.tl, t.tr, t.bl, t.br);
}

// Signed shoelace area of tl -> tr -> br -> bl; positive for valid tetragons.
double signed_area(const Tetragon& t);
double area(const Tetragon& t);
BoundingBox bounding_box(const Tetragon& t);
Point2 centroid(const Tetragon& t);

// Exact intersection area of two valid tetragons.
double intersection_area(const Tetragon& a, const Tetragon& b);
double tetragon_iou(const Tetragon& a, const Tetragon& b);

// Even-odd point containment against the tetragon boundary.
bool contains(const Tetragon& t, double x, double y);

// Projective map, row-major 3x3, normalized so m[8] == 1 when possible.
struct Homography {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  double determinant() const;
  Homography inverse() const;
  void apply(double x, double y, double& u, double& v) const;
  Point2 apply(const Point2& p) const;
};

// Solves the 8-DOF system for the map src[i] -> dst[i].
Homography homography_from_points(const std::array<Point2, 4>& src,
                                  const std::array<Point2, 4>& dst);

// tl -> (0,0), tr -> (out_w,0), bl -> (0,out_h), br -> (out_w,out_h).
Homography homography_from_tetragon(const Tetragon& t, uint32_t out_w,
                                    uint32_t out_h);

// Planar 8-bit raster, C x H x W.
struct Image {
  uint32_t channels = 0;
  uint32_t height = 0;
  uint32_t width = 0;
  std::vector<uint8_t> data;

  Image() = default;
  Image(uint32_t c, uint32_t h, uint32_t w)
      : channels(c), height(h), width(w), data(size_t{c} * h * w, 0) {}

  uint8_t& at(uint32_t c, uint32_t y, uint32_t x) {
    return data[(size_t{c} * height + y) * width + x];
  }
  uint8_t at(uint32_t c, uint32_t y, uint32_t x) const {
    return data[(size_t{c} * height + y) * width + x];
  }
};

// Inverse warp of the tetragon region into an out_w x out_h frontal view.
// Pixel centers sit at half-integer coordinates; bilinear taps falling
// outside the source contribute zero.
Image rectify(const Image& image, const Tetragon& t, uint32_t out_w,
              uint32_t out_h);

}  // namespace tetradec

#endif  // TETRADEC_GEOMETRY_HPP_
