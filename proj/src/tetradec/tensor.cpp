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
#include "tetradec/tensor.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <numeric>

#include "tetradec/error.hpp"

namespace tetradec {

namespace {

size_t product(const std::vector<size_t>& shape) {
  return std::accumulate(shape.begin(), shape.end(), size_t{1},
                         std::multiplies<>());
}

}  // namespace

Tensor::Tensor(std::vector<size_t> shape, float fill)
    : shape_(std::move(shape)), data_(product(shape_), fill) {}

Tensor::Tensor(std::vector<size_t> shape, std::vector<float> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != product(shape_)) {
    throw Error(ErrorCode::kShapeError,
                "tensor data length " + std::to_string(data_.size()) +
                    " does not match shape " + shape_string());
  }
}

size_t Tensor::offset(std::initializer_list<size_t> index) const {
  assert(index.size() == shape_.size());
  size_t flat = 0;
  size_t axis = 0;
  for (size_t i : index) {
    assert(i < shape_[axis]);
    flat = flat * shape_[axis] + i;
    ++axis;
  }
  return flat;
}

std::string Tensor::shape_string() const {
  std::string s = "[";
  for (size_t i = 0; i < shape_.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape_[i]);
  }
  return s + "]";
}

void require_ndim(const Tensor& t, size_t ndim, const char* what) {
  if (t.ndim() != ndim) {
    throw Error(ErrorCode::kShapeError,
                std::string(what) + ": expected a " + std::to_string(ndim) +
                    "-D tensor, got " + t.shape_string());
  }
}

Tensor corner_pool(const Tensor& features, CornerType type) {
  require_ndim(features, 3, "corner_pool");
  const size_t channels = features.dim(0), h = features.dim(1),
               w = features.dim(2);
  const bool scan_right = type == CornerType::kTL || type == CornerType::kBL;
  const bool scan_down = type == CornerType::kTL || type == CornerType::kTR;

  Tensor out(features.shape());
  if (h == 0 || w == 0) return out;
  std::vector<float> column_max(w);
  for (size_t c = 0; c < channels; ++c) {
    const float* in = features.data().data() + c * h * w;
    float* dst = out.data().data() + c * h * w;
    // Horizontal component.
    for (size_t y = 0; y < h; ++y) {
      const float* row = in + y * w;
      float* out_row = dst + y * w;
      if (scan_right) {
        float m = row[w - 1];
        for (size_t x = w; x-- > 0;) {
          m = std::max(m, row[x]);
          out_row[x] = m;
        }
      } else {
        float m = row[0];
        for (size_t x = 0; x < w; ++x) {
          m = std::max(m, row[x]);
          out_row[x] = m;
        }
      }
    }
    // Vertical component, accumulated row by row.
    if (scan_down) {
      std::copy_n(in + (h - 1) * w, w, column_max.begin());
      for (size_t y = h; y-- > 0;) {
        for (size_t x = 0; x < w; ++x) {
          column_max[x] = std::max(column_max[x], in[y * w + x]);
          dst[y * w + x] += column_max[x];
        }
      }
    } else {
      std::copy_n(in, w, column_max.begin());
      for (size_t y = 0; y < h; ++y) {
        for (size_t x = 0; x < w; ++x) {
          column_max[x] = std::max(column_max[x], in[y * w + x]);
          dst[y * w + x] += column_max[x];
        }
      }
    }
  }
  return out;
}

Tensor nms(const Tensor& heat, int window) {
  require_ndim(heat, 2, "nms");
  if (window < 1 || window % 2 == 0) {
    throw Error(ErrorCode::kInvalidArgument, "nms window must be odd");
  }
  const int64_t h = static_cast<int64_t>(heat.dim(0)),
                w = static_cast<int64_t>(heat.dim(1));
  const int64_t half = window / 2;
  Tensor out(heat.shape());
  for (int64_t y = 0; y < h; ++y) {
    for (int64_t x = 0; x < w; ++x) {
      const float v = heat[y * w + x];
      bool peak = true;
      for (int64_t yy = std::max<int64_t>(0, y - half);
           peak && yy <= std::min(h - 1, y + half); ++yy) {
        for (int64_t xx = std::max<int64_t>(0, x - half);
             xx <= std::min(w - 1, x + half); ++xx) {
          if (heat[yy * w + xx] > v) {
            peak = false;
            break;
          }
        }
      }
      if (peak) out[y * w + x] = v;
    }
  }
  return out;
}

std::vector<Peak> topk(std::span<const float> heat, size_t height, size_t width,
                       uint32_t k) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "topk: k must be >= 1");
  const size_t n = height * width;
  std::vector<uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  const size_t take = std::min<size_t>(k, n);
  auto better = [&](uint32_t a, uint32_t b) {
    if (heat[a] != heat[b]) return heat[a] > heat[b];
    return a < b;
  };
  std::partial_sort(order.begin(), order.begin() + take, order.end(), better);
  std::vector<Peak> peaks;
  peaks.reserve(take);
  for (size_t i = 0; i < take; ++i) {
    const uint32_t idx = order[i];
    peaks.push_back({static_cast<uint32_t>(idx / width),
                     static_cast<uint32_t>(idx % width), heat[idx]});
  }
  return peaks;
}

std::vector<Peak> topk(const Tensor& heat, uint32_t k) {
  require_ndim(heat, 2, "topk");
  return topk(heat.data(), heat.dim(0), heat.dim(1), k);
}

}  // namespace tetradec
