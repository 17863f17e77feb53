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
#ifndef TETRADEC_RENDER_HPP_
#define TETRADEC_RENDER_HPP_

#include <array>
#include <cstdint>

#include "tetradec/geometry.hpp"
#include "tetradec/tensor.hpp"

namespace tetradec {

// Heat below this is drawn black.
inline constexpr float kVisibleHeat = 0.1f;

// Rainbow colormap, red at 0 through violet at 1. Input is clamped.
std::array<uint8_t, 3> rainbow(double v);

// Four panels side by side (tl, tr, bl, br), each Hf x Wf, scaled up by
// `scale`. A cell whose heat (max over classes) is below `threshold` is
// black; otherwise it shows its embedding, min-max normalized over all
// visible cells of the four maps and rainbow mapped.
Image render_heat(const Tensor& heat, const Tensor& embed,
                  float threshold = kVisibleHeat, uint32_t scale = 1);

}  // namespace tetradec

#endif  // TETRADEC_RENDER_HPP_
