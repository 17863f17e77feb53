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
#ifndef TETRADEC_NETWORK_OUTPUT_HPP_
#define TETRADEC_NETWORK_OUTPUT_HPP_

#include <cstdint>

#include "tetradec/tensor.hpp"

namespace tetradec {

// Predicted maps for the four corner types.
//   heat:   4 x C x Hf x Wf, values in [0, 1]
//   embed:  4 x Hf x Wf, one scalar embedding per corner type and cell
//   offset: 4 x 2 x Hf x Wf, sub-cell (dx, dy)
struct NetworkOutput {
  Tensor heat;
  Tensor embed;
  Tensor offset;
  uint32_t stride = 4;

  size_t num_classes() const { return heat.dim(1); }
  size_t height() const { return heat.dim(2); }
  size_t width() const { return heat.dim(3); }

  // Throws ShapeMismatch if the three maps disagree.
  void validate() const;
};

}  // namespace tetradec

#endif  // TETRADEC_NETWORK_OUTPUT_HPP_
