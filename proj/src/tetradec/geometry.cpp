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
#include "tetradec/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "tetradec/error.hpp"

namespace tetradec {

namespace {

struct Vec {
  double x, y;
};

inline Vec to_vec(const Point2& p) { return {p.x, p.y}; }

inline double cross(const Vec& o, const Vec& a, const Vec& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline int sign_of(double v) { return (v > 0) - (v < 0); }

bool on_segment(const Vec& p, const Vec& a, const Vec& b) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

// Closed-segment intersection, touching counts.
bool segments_intersect(const Vec& a, const Vec& b, const Vec& c,
                        const Vec& d) {
  const int d1 = sign_of(cross(c, d, a));
  const int d2 = sign_of(cross(c, d, b));
  const int d3 = sign_of(cross(a, b, c));
  const int d4 = sign_of(cross(a, b, d));
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  if (d1 == 0 && on_segment(a, c, d)) return true;
  if (d2 == 0 && on_segment(b, c, d)) return true;
  if (d3 == 0 && on_segment(c, a, b)) return true;
  if (d4 == 0 && on_segment(d, a, b)) return true;
  return false;
}

using Triangle = std::array<Vec, 3>;

double polygon_area(const std::vector<Vec>& poly) {
  double s = 0.0;
  for (size_t i = 0, n = poly.size(); i < n; ++i) {
    const Vec& p = poly[i];
    const Vec& q = poly[(i + 1) % n];
    s += p.x * q.y - q.x * p.y;
  }
  return 0.5 * s;
}

// Splits a positively oriented simple quadrilateral along an interior
// diagonal.
std::array<Triangle, 2> triangulate(const Tetragon& t) {
  const auto poly = t.polygon();
  const Vec v0 = to_vec(poly[0]), v1 = to_vec(poly[1]), v2 = to_vec(poly[2]),
            v3 = to_vec(poly[3]);
  if (cross(v0, v1, v2) > 0 && cross(v0, v2, v3) > 0) {
    return {Triangle{v0, v1, v2}, Triangle{v0, v2, v3}};
  }
  return {Triangle{v1, v2, v3}, Triangle{v1, v3, v0}};
}

// Sutherland-Hodgman of a convex subject against a convex, positively
// oriented clip triangle.
double convex_intersection_area(const Triangle& subject, const Triangle& clip) {
  std::vector<Vec> output(subject.begin(), subject.end());
  std::vector<Vec> input;
  for (int e = 0; e < 3 && !output.empty(); ++e) {
    const Vec& a = clip[e];
    const Vec& b = clip[(e + 1) % 3];
    input.swap(output);
    output.clear();
    for (size_t i = 0, n = input.size(); i < n; ++i) {
      const Vec& cur = input[i];
      const Vec& prev = input[(i + n - 1) % n];
      const double c_cur = cross(a, b, cur);
      const double c_prev = cross(a, b, prev);
      if (c_cur >= 0) {
        if (c_prev < 0) {
          const double s = c_prev / (c_prev - c_cur);
          output.push_back({prev.x + s * (cur.x - prev.x),
                            prev.y + s * (cur.y - prev.y)});
        }
        output.push_back(cur);
      } else if (c_prev >= 0) {
        const double s = c_prev / (c_prev - c_cur);
        output.push_back(
            {prev.x + s * (cur.x - prev.x), prev.y + s * (cur.y - prev.y)});
      }
    }
  }
  if (output.size() < 3) return 0.0;
  return std::max(0.0, polygon_area(output));
}

}  // namespace

const char* corner_name(CornerType t) {
  switch (t) {
    case CornerType::kTL: return "tl";
    case CornerType::kTR: return "tr";
    case CornerType::kBL: return "bl";
    case CornerType::kBR: return "br";
  }
  return "?";
}

const Point2& Tetragon::corner(CornerType t) const {
  switch (t) {
    case CornerType::kTL: return tl;
    case CornerType::kTR: return tr;
    case CornerType::kBL: return bl;
    case CornerType::kBR: break;
  }
  return br;
}

Point2& Tetragon::corner(CornerType t) {
  return const_cast<Point2&>(std::as_const(*this).corner(t));
}

bool is_valid(const Point2& tl, const Point2& tr, const Point2& bl,
              const Point2& br) {
  for (const Point2* p : {&tl, &tr, &bl, &br}) {
    if (!std::isfinite(p->x) || !std::isfinite(p->y)) return false;
  }
  if (!(tl.x < tr.x && bl.x < br.x)) return false;
  if (!(tl.y < bl.y && tr.y < br.y)) return false;
  const Vec a = to_vec(tl), b = to_vec(tr), c = to_vec(br), d = to_vec(bl);
  // Opposite edges of the boundary must not meet.
  if (segments_intersect(a, b, c, d)) return false;
  if (segments_intersect(b, c, d, a)) return false;
  return signed_area(Tetragon{tl, tr, bl, br}) > 0.0;
}

double signed_area(const Tetragon& t) {
  const auto poly = t.polygon();
  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    const Point2& p = poly[i];
    const Point2& q = poly[(i + 1) % 4];
    s += double{p.x} * q.y - double{q.x} * p.y;
  }
  return 0.5 * s;
}

double area(const Tetragon& t) { return std::abs(signed_area(t)); }

BoundingBox bounding_box(const Tetragon& t) {
  BoundingBox box{t.tl.x, t.tl.y, t.tl.x, t.tl.y};
  for (const Point2& p : t.polygon()) {
    box.x0 = std::min<double>(box.x0, p.x);
    box.y0 = std::min<double>(box.y0, p.y);
    box.x1 = std::max<double>(box.x1, p.x);
    box.y1 = std::max<double>(box.y1, p.y);
  }
  return box;
}

Point2 centroid(const Tetragon& t) {
  // Area-weighted centroid of the two triangles.
  const auto tris = triangulate(t);
  double cx = 0.0, cy = 0.0, total = 0.0;
  for (const Triangle& tri : tris) {
    const double a = 0.5 * cross(tri[0], tri[1], tri[2]);
    cx += a * (tri[0].x + tri[1].x + tri[2].x) / 3.0;
    cy += a * (tri[0].y + tri[1].y + tri[2].y) / 3.0;
    total += a;
  }
  if (total == 0.0) {
    return {(t.tl.x + t.tr.x + t.bl.x + t.br.x) / 4.0f,
            (t.tl.y + t.tr.y + t.bl.y + t.br.y) / 4.0f};
  }
  return {static_cast<float>(cx / total), static_cast<float>(cy / total)};
}

namespace {

// Strict weak order on tetragons, used to make clipping argument order
// independent so intersection_area(a, b) == intersection_area(b, a) exactly.
bool precedes(const Tetragon& a, const Tetragon& b) {
  const auto pa = a.polygon(), pb = b.polygon();
  for (int i = 0; i < 4; ++i) {
    if (pa[i].x != pb[i].x) return pa[i].x < pb[i].x;
    if (pa[i].y != pb[i].y) return pa[i].y < pb[i].y;
  }
  return false;
}

}  // namespace

double intersection_area(const Tetragon& first, const Tetragon& second) {
  const bool swap = precedes(second, first);
  const Tetragon& a = swap ? second : first;
  const Tetragon& b = swap ? first : second;
  const BoundingBox ba = bounding_box(a), bb = bounding_box(b);
  if (ba.x1 <= bb.x0 || bb.x1 <= ba.x0 || ba.y1 <= bb.y0 || bb.y1 <= ba.y0) {
    return 0.0;
  }
  const auto ta = triangulate(a);
  const auto tb = triangulate(b);
  double total = 0.0;
  for (const Triangle& s : ta) {
    for (const Triangle& c : tb) total += convex_intersection_area(s, c);
  }
  return total;
}

double tetragon_iou(const Tetragon& a, const Tetragon& b) {
  const double inter = intersection_area(a, b);
  if (inter <= 0.0) return 0.0;
  const double area_a = area(a), area_b = area(b);
  const double uni = std::min(area_a, area_b) + std::max(area_a, area_b) - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

bool contains(const Tetragon& t, double x, double y) {
  const auto poly = t.polygon();
  bool inside = false;
  for (int i = 0, j = 3; i < 4; j = i++) {
    const double yi = poly[i].y, yj = poly[j].y;
    const double xi = poly[i].x, xj = poly[j].x;
    if ((yi > y) != (yj > y)) {
      const double xc = xi + (y - yi) * (xj - xi) / (yj - yi);
      if (x < xc) inside = !inside;
    }
  }
  return inside;
}

double Homography::determinant() const {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) -
         m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

Homography Homography::inverse() const {
  const double det = determinant();
  if (std::abs(det) <= 1e-9) {
    throw Error(ErrorCode::kDegenerateGeometry, "homography is singular");
  }
  Homography inv;
  inv.m = {(m[4] * m[8] - m[5] * m[7]) / det,
           (m[2] * m[7] - m[1] * m[8]) / det,
           (m[1] * m[5] - m[2] * m[4]) / det,
           (m[5] * m[6] - m[3] * m[8]) / det,
           (m[0] * m[8] - m[2] * m[6]) / det,
           (m[2] * m[3] - m[0] * m[5]) / det,
           (m[3] * m[7] - m[4] * m[6]) / det,
           (m[1] * m[6] - m[0] * m[7]) / det,
           (m[0] * m[4] - m[1] * m[3]) / det};
  if (inv.m[8] != 0.0) {
    const double s = inv.m[8];
    for (double& v : inv.m) v /= s;
  }
  return inv;
}

void Homography::apply(double x, double y, double& u, double& v) const {
  const double w = m[6] * x + m[7] * y + m[8];
  u = (m[0] * x + m[1] * y + m[2]) / w;
  v = (m[3] * x + m[4] * y + m[5]) / w;
}

Point2 Homography::apply(const Point2& p) const {
  double u, v;
  apply(p.x, p.y, u, v);
  return {static_cast<float>(u), static_cast<float>(v)};
}

Homography homography_from_points(const std::array<Point2, 4>& src,
                                  const std::array<Point2, 4>& dst) {
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      for (int k = j + 1; k < 4; ++k) {
        if (std::abs(cross(to_vec(src[i]), to_vec(src[j]), to_vec(src[k]))) <
            1e-9) {
          throw Error(ErrorCode::kDegenerateGeometry,
                      "three source vertices are collinear");
        }
      }
    }
  }
  // Augmented 8x9 system, unknowns h0..h7 with h8 fixed to 1.
  double a[8][9] = {};
  for (int i = 0; i < 4; ++i) {
    const double x = src[i].x, y = src[i].y;
    const double u = dst[i].x, v = dst[i].y;
    double* r0 = a[2 * i];
    double* r1 = a[2 * i + 1];
    r0[0] = x; r0[1] = y; r0[2] = 1; r0[6] = -u * x; r0[7] = -u * y; r0[8] = u;
    r1[3] = x; r1[4] = y; r1[5] = 1; r1[6] = -v * x; r1[7] = -v * y; r1[8] = v;
  }
  for (int col = 0; col < 8; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 8; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) < 1e-12) {
      throw Error(ErrorCode::kDegenerateGeometry,
                  "homography linear system is singular");
    }
    if (pivot != col) std::swap(a[pivot], a[col]);
    for (int r = 0; r < 8; ++r) {
      if (r == col || a[r][col] == 0.0) continue;
      const double f = a[r][col] / a[col][col];
      for (int c = col; c < 9; ++c) a[r][c] -= f * a[col][c];
    }
  }
  Homography h;
  for (int i = 0; i < 8; ++i) h.m[i] = a[i][8] / a[i][i];
  h.m[8] = 1.0;
  if (std::abs(h.determinant()) <= 1e-9) {
    throw Error(ErrorCode::kDegenerateGeometry, "homography is singular");
  }
  return h;
}

Homography homography_from_tetragon(const Tetragon& t, uint32_t out_w,
                                    uint32_t out_h) {
  if (out_w < 1 || out_h < 1) {
    throw Error(ErrorCode::kInvalidArgument, "output size must be positive");
  }
  const float w = static_cast<float>(out_w), h = static_cast<float>(out_h);
  return homography_from_points({t.tl, t.tr, t.bl, t.br},
                                {Point2{0, 0}, Point2{w, 0}, Point2{0, h},
                                 Point2{w, h}});
}

Image rectify(const Image& image, const Tetragon& t, uint32_t out_w,
              uint32_t out_h) {
  const Homography to_src = homography_from_tetragon(t, out_w, out_h).inverse();
  Image out(image.channels, out_h, out_w);
  const int64_t w = image.width, h = image.height;
  auto tap = [&](uint32_t c, int64_t y, int64_t x) -> double {
    if (x < 0 || y < 0 || x >= w || y >= h) return 0.0;
    return image.at(c, static_cast<uint32_t>(y), static_cast<uint32_t>(x));
  };
  for (uint32_t r = 0; r < out_h; ++r) {
    for (uint32_t col = 0; col < out_w; ++col) {
      double sx, sy;
      to_src.apply(col + 0.5, r + 0.5, sx, sy);
      sx -= 0.5;
      sy -= 0.5;
      if (!std::isfinite(sx) || !std::isfinite(sy)) continue;
      const double fx = std::floor(sx), fy = std::floor(sy);
      if (fx < -2 || fy < -2 || fx > w + 1 || fy > h + 1) continue;
      const int64_t x0 = static_cast<int64_t>(fx), y0 = static_cast<int64_t>(fy);
      const double ax = sx - fx, ay = sy - fy;
      for (uint32_t c = 0; c < image.channels; ++c) {
        const double top = (1 - ax) * tap(c, y0, x0) + ax * tap(c, y0, x0 + 1);
        const double bottom =
            (1 - ax) * tap(c, y0 + 1, x0) + ax * tap(c, y0 + 1, x0 + 1);
        const double v = (1 - ay) * top + ay * bottom;
        out.at(c, r, col) =
            static_cast<uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      }
    }
  }
  return out;
}

}  // namespace tetradec
