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
#include "tetradec/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tetradec/error.hpp"

namespace tetradec {

std::array<uint8_t, 3> rainbow(double v) {
  v = std::clamp(std::isfinite(v) ? v : 0.0, 0.0, 1.0);
  // Hue 0 (red) to 270 degrees (violet), full saturation and value.
  const double hue = v * 270.0 / 60.0;
  const int sector = std::min(4, static_cast<int>(hue));
  const double f = hue - sector;
  double r = 0, g = 0, b = 0;
  switch (sector) {
    case 0: r = 1; g = f; break;
    case 1: r = 1 - f; g = 1; break;
    case 2: g = 1; b = f; break;
    case 3: g = 1 - f; b = 1; break;
    default: r = f; b = 1; break;
  }
  auto to_u8 = [](double c) { return static_cast<uint8_t>(std::lround(c * 255.0)); };
  return {to_u8(r), to_u8(g), to_u8(b)};
}

Image render_heat(const Tensor& heat, const Tensor& embed, float threshold,
                  uint32_t scale) {
  require_ndim(heat, 4, "render_heat heat");
  require_ndim(embed, 3, "render_heat embed");
  if (heat.dim(0) != 4 || embed.dim(0) != 4 || embed.dim(1) != heat.dim(2) ||
      embed.dim(2) != heat.dim(3)) {
    throw Error(ErrorCode::kShapeMismatch, "render_heat: heat " + heat.shape_string() +
                                               " and embedding " + embed.shape_string() +
                                               " disagree");
  }
  if (scale < 1) throw Error(ErrorCode::kInvalidArgument, "scale must be >= 1");
  const size_t classes = heat.dim(1), h = heat.dim(2), w = heat.dim(3);
  const size_t plane = h * w;

  std::vector<float> peak(4 * plane, 0.0f);
  for (size_t t = 0; t < 4; ++t) {
    for (size_t c = 0; c < classes; ++c) {
      for (size_t i = 0; i < plane; ++i) {
        peak[t * plane + i] = std::max(peak[t * plane + i], heat[(t * classes + c) * plane + i]);
      }
    }
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (size_t i = 0; i < 4 * plane; ++i) {
    if (peak[i] >= threshold) {
      lo = std::min<double>(lo, embed[i]);
      hi = std::max<double>(hi, embed[i]);
    }
  }
  const double range = hi > lo ? hi - lo : 1.0;

  Image out(3, static_cast<uint32_t>(h * scale), static_cast<uint32_t>(4 * w * scale));
  for (size_t t = 0; t < 4; ++t) {
    for (size_t y = 0; y < h; ++y) {
      for (size_t x = 0; x < w; ++x) {
        const size_t i = t * plane + y * w + x;
        if (peak[i] < threshold) continue;
        const auto rgb = rainbow((embed[i] - lo) / range);
        for (uint32_t sy = 0; sy < scale; ++sy) {
          for (uint32_t sx = 0; sx < scale; ++sx) {
            const auto oy = static_cast<uint32_t>(y * scale + sy);
            const auto ox = static_cast<uint32_t>((t * w + x) * scale + sx);
            for (uint32_t c = 0; c < 3; ++c) out.at(c, oy, ox) = rgb[c];
          }
        }
      }
    }
  }
  return out;
}

}  // namespace tetradec
