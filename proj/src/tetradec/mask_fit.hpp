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
#ifndef TETRADEC_MASK_FIT_HPP_
#define TETRADEC_MASK_FIT_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include "tetradec/geometry.hpp"

namespace tetradec {

// Row-major, one byte per pixel (0 or 1). Pixel (row, col) covers the unit
// square [col, col+1] x [row, row+1].
struct BinaryMask {
  uint32_t width = 0;
  uint32_t height = 0;
  std::vector<uint8_t> bits;

  BinaryMask() = default;
  BinaryMask(uint32_t w, uint32_t h) : width(w), height(h), bits(size_t{w} * h, 0) {}

  bool get(uint32_t row, uint32_t col) const { return bits[size_t{row} * width + col] != 0; }
  void set(uint32_t row, uint32_t col, bool on = true) {
    bits[size_t{row} * width + col] = on ? 1 : 0;
  }
  size_t count() const;
};

// Scanline fill: a pixel belongs to the tetragon when its center does.
BinaryMask rasterize(const Tetragon& t, uint32_t width, uint32_t height);

// IoU between a tetragon and a mask, both on the mask's pixel grid. Tetragon
// pixels outside the raster still count towards the union.
class MaskIou {
 public:
  explicit MaskIou(const BinaryMask& mask);
  double operator()(const Tetragon& t) const;

 private:
  uint32_t width_, height_;
  size_t mask_count_;
  // prefix_[row * (width + 1) + col] = set pixels in [0, col) of that row.
  std::vector<uint32_t> prefix_;
};

struct FitResult {
  Tetragon tetragon;
  double iou = 0.0;
  // Completed descent rounds.
  uint32_t iterations = 0;
  Tetragon initial;
  double initial_iou = 0.0;
  // IoU after initialization and after every accepted move.
  std::vector<double> trace;
};

inline constexpr uint32_t kDefaultFitRounds = 6;

// Perturbation radii swept once per round, coarse to fine. The sub-pixel
// tail lets vertices settle between lattice points.
inline constexpr std::array<float, 6> kFitRadii = {8, 4, 2, 1, 0.5f, 0.25f};

// Extreme-point initialization followed by deterministic coordinate descent
// over vertex moves at each radius in kFitRadii. Each vertex in the order
// tl, tr, br, bl scans its offsets row-major, takes the first strict IoU
// improvement that keeps the tetragon valid and rescans from there. Stops
// after a round without improvement or max_rounds.
FitResult fit_tetragon(const BinaryMask& mask,
                       uint32_t max_rounds = kDefaultFitRounds);

}  // namespace tetradec

#endif  // TETRADEC_MASK_FIT_HPP_
