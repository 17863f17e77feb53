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
#include <cmath>

#include "doctest.h"
#include "tetradec/error.hpp"
#include "tetradec/gt_encoder.hpp"
#include "tetradec/losses.hpp"

namespace tetradec {
namespace {

constexpr double kGradTol = 1e-4;

// Object whose four corners sit in column `col` of rows 0..3.
ObjectCorners column_object(uint32_t col) {
  ObjectCorners obj;
  for (int t = 0; t < 4; ++t) obj.cells[t] = {static_cast<uint32_t>(t), col};
  return obj;
}

void set_embeddings(Tensor& embed, const ObjectCorners& obj, std::array<float, 4> values) {
  for (int t = 0; t < 4; ++t) embed.at({size_t(t), obj.cells[t].row, obj.cells[t].col}) = values[t];
}

// Peaks-only prediction: 1 - eps on positive cells, eps elsewhere.
Tensor peak_prediction(const TargetMaps& gt) {
  Tensor pred(gt.heat.shape(), static_cast<float>(kProbEpsilon));
  for (size_t i = 0; i < pred.size(); ++i) {
    if (gt.heat[i] == 1.0f) pred[i] = static_cast<float>(1.0 - kProbEpsilon);
  }
  return pred;
}

TargetMaps two_object_targets() {
  const std::vector<Annotation> anns = {
      {0, {{4, 4}, {40, 6}, {5, 30}, {38, 34}}},
      {0, {{50, 40}, {90, 42}, {52, 80}, {92, 86}}}};
  return encode_targets(anns, 1, 100, 100, 4);
}

TEST_CASE("detection loss of a peaks-only prediction is near zero") {
  const TargetMaps gt = two_object_targets();
  CHECK(detection_loss(peak_prediction(gt), gt) < 1e-5);
}

TEST_CASE("detection loss with no objects and an all-eps prediction is near zero") {
  const TargetMaps gt = encode_targets({}, 1, 32, 32, 4);
  CHECK(detection_loss(Tensor(gt.heat.shape(), 1e-7f), gt) < 1e-6);
}

TEST_CASE("detection loss of a single positive cell at p = 0.5") {
  TargetMaps gt;
  gt.heat = Tensor({4, 1, 1, 1}, 1.0f);
  gt.offset = Tensor({4, 2, 1, 1});
  gt.objects.push_back(ObjectCorners{});
  Tensor pred({4, 1, 1, 1}, static_cast<float>(1.0 - kProbEpsilon));
  pred[0] = 0.5f;
  // -(1 - 0.5)^2 ln 0.5
  CHECK(detection_loss(pred, gt) == doctest::Approx(0.25 * std::log(2.0)).epsilon(1e-6));
  CHECK(detection_loss(pred, gt) == doctest::Approx(0.1733).epsilon(1e-3));
}

TEST_CASE("detection loss rejects mismatched shapes") {
  const TargetMaps gt = encode_targets({}, 1, 32, 32, 4);
  try {
    detection_loss(Tensor({4, 1, 8, 7}), gt);
    FAIL("expected ShapeMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kShapeMismatch);
  }
}

TEST_CASE("offset loss values on both smooth-L1 branches") {
  const TargetMaps gt = two_object_targets();
  CHECK(offset_loss(gt.offset, gt) == 0.0);

  TargetMaps one = encode_targets({{0, {{4, 4}, {40, 6}, {5, 30}, {38, 34}}}}, 1, 100, 100, 4);
  const size_t h = one.height(), w = one.width();
  auto shifted = [&](float dx) {
    Tensor pred = one.offset;
    for (int t = 0; t < 4; ++t) {
      const Cell c = one.objects[0].cells[t];
      pred[((t * 2) * h + c.row) * w + c.col] += dx;
    }
    return pred;
  };
  // Every corner off by (0.5, 0): 0.5 * 0.25 per corner, averaged over 4.
  CHECK(offset_loss(shifted(0.5f), one) == doctest::Approx(0.125).epsilon(1e-6));
  // Every corner off by (2, 0): linear branch 2 - 0.5.
  CHECK(offset_loss(shifted(2.0f), one) == doctest::Approx(1.5).epsilon(1e-6));
  // A single corner off by (0.5, 0) contributes a quarter of that.
  Tensor single = one.offset;
  const Cell c = one.objects[0].cells[0];
  single[c.row * w + c.col] += 0.5f;
  CHECK(offset_loss(single, one) == doctest::Approx(0.125 / 4).epsilon(1e-6));
}

TEST_CASE("pull loss fixtures") {
  Tensor embed({4, 4, 4});
  const ObjectCorners a = column_object(0), b = column_object(2);
  set_embeddings(embed, a, {3, 3, 3, 3});
  CHECK(pull_loss(embed, std::vector<ObjectCorners>{a}) == 0.0);

  set_embeddings(embed, a, {0, 0, 0, 4});
  CHECK(std::abs(pull_loss(embed, std::vector<ObjectCorners>{a}) - 12.0) <= 1e-6);

  set_embeddings(embed, a, {-5, -5, -5, -5});
  set_embeddings(embed, b, {9, 9, 9, 9});
  CHECK(pull_loss(embed, std::vector<ObjectCorners>{a, b}) == 0.0);
  CHECK(pull_loss(embed, std::vector<ObjectCorners>{}) == 0.0);
}

TEST_CASE("push loss fixtures") {
  Tensor embed({4, 4, 4});
  const ObjectCorners a = column_object(0), b = column_object(2);
  set_embeddings(embed, a, {0, 0, 0, 0});
  set_embeddings(embed, b, {1, 1, 1, 1});
  CHECK(push_loss(embed, std::vector<ObjectCorners>{a, b}) == 0.0);

  set_embeddings(embed, b, {0.5f, 0.5f, 0.5f, 0.5f});
  CHECK(std::abs(push_loss(embed, std::vector<ObjectCorners>{a, b}) - 0.5) <= 1e-6);
  // Means 0 and 0.5 reached through unequal corner values.
  set_embeddings(embed, b, {0, 1, 0, 1});
  CHECK(std::abs(push_loss(embed, std::vector<ObjectCorners>{a, b}) - 0.5) <= 1e-6);

  CHECK(push_loss(embed, std::vector<ObjectCorners>{a}) == 0.0);
}

TEST_CASE("pull and push invariances") {
  const GradCheckInputs in = random_gradcheck_inputs(7);
  const auto& objs = in.gt.objects;
  std::vector<ObjectCorners> reversed(objs.rbegin(), objs.rend());
  Tensor shifted = in.pred.embed, negated = in.pred.embed;
  for (float& v : shifted.values()) v += 3.0f;
  for (float& v : negated.values()) v = -v;
  const double pull = pull_loss(in.pred.embed, objs);
  const double push = push_loss(in.pred.embed, objs);
  CHECK(pull_loss(in.pred.embed, reversed) == doctest::Approx(pull).epsilon(1e-12));
  CHECK(push_loss(in.pred.embed, reversed) == doctest::Approx(push).epsilon(1e-12));
  CHECK(pull_loss(shifted, objs) == doctest::Approx(pull).epsilon(1e-5));
  CHECK(push_loss(negated, objs) == doctest::Approx(push).epsilon(1e-12));
}

TEST_CASE("total loss of a perfect prediction is near zero") {
  const TargetMaps gt = two_object_targets();
  NetworkOutput pred{peak_prediction(gt), Tensor({4, gt.height(), gt.width()}), gt.offset, 4};
  for (size_t k = 0; k < gt.objects.size(); ++k) {
    for (int t = 0; t < 4; ++t) {
      const Cell c = gt.objects[k].cells[t];
      pred.embed.at({size_t(t), c.row, c.col}) = 2.0f * k;
    }
  }
  const LossBreakdown b = total_loss(pred, gt);
  CHECK(b.total < 1e-4);
  CHECK(b.pull == 0.0);
  CHECK(b.push == 0.0);
}

TEST_CASE("total loss recombines its weighted components") {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const GradCheckInputs in = random_gradcheck_inputs(seed);
    LossWeights w;
    w.w_off = 0.7f;
    w.w_pull = 0.3f;
    w.w_push = 0.2f;
    const LossBreakdown b = total_loss(in.pred, in.gt, w);
    CHECK(b.det == doctest::Approx(detection_loss(in.pred.heat, in.gt)).epsilon(1e-12));
    CHECK(b.off == doctest::Approx(offset_loss(in.pred.offset, in.gt)).epsilon(1e-12));
    CHECK(std::abs(b.total - (b.det + 0.7f * b.off + 0.3f * b.pull + 0.2f * b.push)) <= 1e-6);
    CHECK(b.det >= 0.0);
    CHECK(b.off >= 0.0);
    CHECK(b.pull >= 0.0);
    CHECK(b.push >= 0.0);

    LossWeights zero = w;
    zero.w_off = zero.w_pull = zero.w_push = 0.0f;
    CHECK(total_loss(in.pred, in.gt, zero).total == b.det);
  }
}

TEST_CASE("default loss weights") {
  const LossWeights w;
  CHECK(w.w_off == 1.0f);
  CHECK(w.w_pull == 0.1f);
  CHECK(w.w_push == 0.1f);
  CHECK(w.alpha == 2.0f);
  CHECK(w.beta == 4.0f);
}

TEST_CASE("analytic gradients match central differences") {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const GradCheckInputs in = random_gradcheck_inputs(seed);
    CHECK(in.pred.embed.shape() == std::vector<size_t>{4, 8, 8});
    for (LossComponent c : {LossComponent::kDetection, LossComponent::kOffset,
                            LossComponent::kPull, LossComponent::kPush,
                            LossComponent::kTotal}) {
      CHECK_MESSAGE(gradient_check(c, in) < kGradTol,
                    loss_component_name(c) << " seed " << seed);
    }
  }
}

TEST_CASE("gradient check inputs exercise every loss branch") {
  bool push_active = false, linear_offset = false, quadratic_offset = false;
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const GradCheckInputs in = random_gradcheck_inputs(seed);
    push_active = push_active || push_loss(in.pred.embed, in.gt.objects) > 0.0;
    CHECK(pull_loss(in.pred.embed, in.gt.objects) > 0.0);
    for (float v : in.pred.heat.values()) {
      CHECK(v >= 0.1f);
      CHECK(v <= 0.9f);
    }
    for (const ObjectCorners& obj : in.gt.objects) {
      for (int t = 0; t < 4; ++t) {
        const double d = std::abs(in.pred.offset.at({size_t(t), 0, obj.cells[t].row,
                                                     obj.cells[t].col}) -
                                  obj.subpixel[t].x);
        linear_offset = linear_offset || d > 1.0;
        quadratic_offset = quadratic_offset || d < 1.0;
      }
    }
  }
  CHECK(push_active);
  CHECK(linear_offset);
  CHECK(quadratic_offset);
}

TEST_CASE("push gradient vanishes with a single object") {
  GradCheckInputs in = random_gradcheck_inputs(1);
  in.gt.objects.resize(1);
  CHECK(gradient_check(LossComponent::kPush, in) == 0.0);
}

}  // namespace
}  // namespace tetradec
