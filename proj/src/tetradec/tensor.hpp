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
#ifndef TETRADEC_TENSOR_HPP_
#define TETRADEC_TENSOR_HPP_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "tetradec/geometry.hpp"

namespace tetradec {

// Dense row-major f32 tensor.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<size_t> shape, float fill = 0.0f);
  Tensor(std::vector<size_t> shape, std::vector<float> data);

  const std::vector<size_t>& shape() const { return shape_; }
  size_t ndim() const { return shape_.size(); }
  size_t dim(size_t i) const { return shape_.at(i); }
  size_t size() const { return data_.size(); }

  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }
  std::vector<float>& values() { return data_; }
  const std::vector<float>& values() const { return data_; }

  float& operator[](size_t i) { return data_[i]; }
  float operator[](size_t i) const { return data_[i]; }

  // Flat offset of a full index; no bounds checks beyond debug asserts.
  size_t offset(std::initializer_list<size_t> index) const;
  float& at(std::initializer_list<size_t> index) { return data_[offset(index)]; }
  float at(std::initializer_list<size_t> index) const {
    return data_[offset(index)];
  }

  std::string shape_string() const;

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  std::vector<size_t> shape_;
  std::vector<float> data_;
};

void require_ndim(const Tensor& t, size_t ndim, const char* what);

// Sum of the two directional running maxima that feed a corner predictor.
// TL scans rightward and downward, BR leftward and upward, TR leftward and
// downward, BL rightward and upward. Input and output are C x H x W.
Tensor corner_pool(const Tensor& features, CornerType type);

// Keeps cells equal to the maximum of their (clamped) window; others become 0.
Tensor nms(const Tensor& heat, int window = 3);
inline Tensor nms_3x3(const Tensor& heat) { return nms(heat, 3); }

struct Peak {
  uint32_t row;
  uint32_t col;
  float value;

  friend bool operator==(const Peak&, const Peak&) = default;
};

// k largest cells of an H x W map, value descending, ties by row-major index.
std::vector<Peak> topk(const Tensor& heat, uint32_t k);
// Same, on a raw H x W slice.
std::vector<Peak> topk(std::span<const float> heat, size_t height, size_t width,
                       uint32_t k);

}  // namespace tetradec

#endif  // TETRADEC_TENSOR_HPP_
