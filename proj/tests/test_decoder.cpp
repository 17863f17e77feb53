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
#include <chrono>
#include <set>
#include <tuple>

#include "doctest.h"
#include "tetradec/decoder.hpp"
#include "tetradec/error.hpp"
#include "tetradec/gt_encoder.hpp"
#include "tetradec/rng.hpp"
#include "tetradec/synthgen.hpp"

namespace tetradec {
namespace {

Tetragon rect(float x0, float y0, float x1, float y1) {
  return {{x0, y0}, {x1, y0}, {x0, y1}, {x1, y1}};
}

CornerCandidate candidate(CornerType type, Point2 at, float heat, float embedding) {
  CornerCandidate c;
  c.corner_type = type;
  c.cell = {static_cast<uint32_t>(at.y / 4), static_cast<uint32_t>(at.x / 4)};
  c.heat = heat;
  c.embedding = embedding;
  c.refined = at;
  return c;
}

CornerCandidates candidates_for(const std::vector<std::pair<Tetragon, float>>& objects,
                                float heat = 1.0f) {
  CornerCandidates cands;
  for (auto& list : cands.lists) list.resize(1);
  for (const auto& [t, e] : objects) {
    for (CornerType type : kCornerTypes) {
      cands.lists[index_of(type)][0].push_back(candidate(type, t.corner(type), heat, e));
    }
  }
  return cands;
}

// Checks the structural guarantees every decoder output must satisfy.
void check_output_invariants(const std::vector<Detection>& dets, const DecodeConfig& cfg) {
  std::set<std::tuple<int, int, uint32_t, uint32_t>> seen;
  for (size_t i = 0; i < dets.size(); ++i) {
    CHECK(is_valid(dets[i].tetragon));
    if (i) CHECK(dets[i].score <= dets[i - 1].score);
    for (CornerType type : kCornerTypes) {
      const CornerCandidate& c = dets[i].corners[index_of(type)];
      CHECK(c.corner_type == type);
      CHECK(seen.insert({index_of(type), c.class_id, c.cell.row, c.cell.col}).second);
    }
    for (size_t j = 0; j < i; ++j) {
      if (dets[i].class_id == dets[j].class_id) {
        CHECK(tetragon_iou(dets[i].tetragon, dets[j].tetragon) <= cfg.det_nms_iou);
      }
    }
  }
}

TEST_CASE("perfect output of one object yields four candidates at the GT cells") {
  const Annotation ann{0, {{21, 30}, {90, 26}, {25, 101}, {97, 110}}};
  const TargetMaps gt = encode_targets({ann}, 1, 128, 128, 4);
  const NetworkOutput out = simulate_output({ann}, NoiseConfig{}, 1, 128, 128, 4);
  const CornerCandidates cands = extract_corners(out);
  CHECK(cands.total() == 4);
  for (CornerType type : kCornerTypes) {
    REQUIRE(cands.lists[index_of(type)][0].size() == 1);
    const CornerCandidate& c = cands.lists[index_of(type)][0][0];
    CHECK(c.cell == gt.objects[0].cells[index_of(type)]);
    CHECK(c.heat == 1.0f);
    CHECK(c.refined.x == doctest::Approx(ann.tetragon.corner(type).x).epsilon(1e-6));
    CHECK(c.refined.y == doctest::Approx(ann.tetragon.corner(type).y).epsilon(1e-6));
  }
}

TEST_CASE("all-zero heat yields no candidates") {
  NetworkOutput out{Tensor({4, 2, 8, 8}), Tensor({4, 8, 8}), Tensor({4, 2, 8, 8}), 4};
  CHECK(extract_corners(out).total() == 0);
  CHECK(decode(out).empty());
}

TEST_CASE("of two adjacent peaks only the larger survives") {
  NetworkOutput out{Tensor({4, 1, 8, 8}), Tensor({4, 8, 8}), Tensor({4, 2, 8, 8}), 4};
  out.heat.at({0, 0, 3, 3}) = 0.8f;
  out.heat.at({0, 0, 3, 4}) = 0.6f;
  out.heat.at({0, 0, 6, 6}) = 0.05f;  // below the floor
  const CornerCandidates cands = extract_corners(out);
  REQUIRE(cands.lists[0][0].size() == 1);
  CHECK(cands.lists[0][0][0].cell == Cell{3, 3});
  CHECK(cands.total() == 1);
}

TEST_CASE("one clean quadruple scores exactly 1") {
  const auto dets = group_and_score(candidates_for({{rect(10, 10, 50, 40), 2.0f}}));
  REQUIRE(dets.size() == 1);
  CHECK(dets[0].score == 1.0f);
  CHECK(dets[0].mean_embedding == 2.0f);
  CHECK(dets[0].tetragon == rect(10, 10, 50, 40));
}

TEST_CASE("two separated objects give two detections with disjoint corners") {
  const DecodeConfig cfg;
  const auto dets = group_and_score(
      candidates_for({{rect(10, 10, 50, 40), 0.0f}, {rect(70, 60, 120, 110), 1.0f}}), cfg);
  REQUIRE(dets.size() == 2);
  check_output_invariants(dets, cfg);
}

TEST_CASE("quadruples violating the ordering constraint are dropped") {
  CornerCandidates cands = candidates_for({{rect(10, 10, 50, 40), 0.0f}});
  cands.lists[index_of(CornerType::kTR)][0][0].refined.x = 5;  // tr left of tl
  CHECK(group_and_score(cands).empty());
}

TEST_CASE("embedding spread beyond tolerance blocks grouping") {
  CornerCandidates cands = candidates_for({{rect(10, 10, 50, 40), 0.0f}});
  cands.lists[index_of(CornerType::kBR)][0][0].embedding = 0.6f;
  CHECK(group_and_score(cands).empty());
  cands.lists[index_of(CornerType::kBR)][0][0].embedding = 0.4f;
  CHECK(group_and_score(cands).size() == 1);
}

TEST_CASE("subtracting the pull term penalizes a mismatched embedding") {
  std::array<CornerCandidate, 4> q;
  for (CornerType type : kCornerTypes) q[index_of(type)] = candidate(type, {0, 0}, 0.8f, 1.0f);
  const float base = quadruple_score(q, ScoreSign::kSubtractPull);
  CHECK(base == doctest::Approx(0.8f));
  q[2].embedding = 1.3f;
  CHECK(quadruple_score(q, ScoreSign::kSubtractPull) < base);
  CHECK(quadruple_score(q, ScoreSign::kAddPull) > base);
  float mean = 0.0f;
  // Mean 1.075; squared deviations 3 * 0.075^2 + 0.225^2 = 0.0675, a quarter of it 0.016875.
  CHECK(quadruple_score(q, ScoreSign::kSubtractPull, &mean) ==
        doctest::Approx(0.8 - 0.016875).epsilon(1e-6));
  CHECK(mean == doctest::Approx(1.075f));
}

TEST_CASE("a corner is never shared between detections") {
  // Two top-left candidates compete for one set of remaining corners.
  CornerCandidates cands = candidates_for({{rect(10, 10, 50, 40), 0.0f}});
  cands.lists[0][0].push_back(candidate(CornerType::kTL, {14, 12}, 0.9f, 0.0f));
  const auto dets = group_and_score(cands);
  REQUIRE(dets.size() == 1);
  CHECK(dets[0].corners[0].heat == 1.0f);
}

TEST_CASE("overlapping detections of the same class are suppressed") {
  // Two near-identical objects: only the stronger one survives NMS.
  CornerCandidates cands = candidates_for({{rect(10, 10, 50, 40), 0.0f}});
  CornerCandidates second = candidates_for({{rect(12, 12, 52, 42), 0.0f}}, 0.5f);
  for (int t = 0; t < 4; ++t) cands.lists[t][0].push_back(second.lists[t][0][0]);
  DecodeConfig cfg;
  auto dets = group_and_score(cands, cfg);
  REQUIRE(dets.size() == 1);
  CHECK(dets[0].score == 1.0f);
  cfg.det_nms_iou = 1.0f;
  dets = group_and_score(cands, cfg);
  CHECK(dets.size() == 2);
}

TEST_CASE("zero-noise round trip recovers every object exactly once") {
  for (uint64_t seed = 0; seed < 25; ++seed) {
    SceneConfig sc;
    sc.seed = seed;
    sc.num_classes = 2;
    const auto scene = generate_scene(sc);
    const NetworkOutput out = simulate_output(scene, NoiseConfig{}, 2, 512, 512, 4);
    for (GroupingMode mode : {GroupingMode::kExhaustive, GroupingMode::kGreedyAnchor}) {
      DecodeConfig cfg;
      cfg.grouping = mode;
      const auto dets = decode(out, cfg);
      check_output_invariants(dets, cfg);
      CHECK(dets.size() == scene.size());
      for (const Annotation& ann : scene) {
        double best = 0.0;
        for (const Detection& d : dets) {
          if (d.class_id == ann.class_id) best = std::max(best, tetragon_iou(d.tetragon, ann.tetragon));
        }
        CHECK(best >= 0.999);
      }
    }
  }
}

TEST_CASE("noisy five-object scenes are recovered at IoU 0.9") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    SceneConfig sc;
    sc.seed = 1000 + seed;
    sc.min_objects = sc.max_objects = 5;
    const auto scene = generate_scene(sc);
    NoiseConfig noise;
    noise.heat_sigma = 0.05f;
    noise.seed = seed;
    const auto dets = decode(simulate_output(scene, noise, 1, 512, 512, 4));
    std::vector<bool> used(dets.size(), false);
    for (const Annotation& ann : scene) {
      int hit = -1;
      for (size_t i = 0; i < dets.size(); ++i) {
        if (!used[i] && tetragon_iou(dets[i].tetragon, ann.tetragon) >= 0.9) {
          hit = static_cast<int>(i);
          break;
        }
      }
      CHECK_MESSAGE(hit >= 0, "seed " << seed);
      if (hit >= 0) used[hit] = true;
    }
    for (size_t i = 0; i < dets.size(); ++i) {
      if (!used[i]) CHECK_MESSAGE(dets[i].score <= 0.5f, "seed " << seed);
    }
  }
}

TEST_CASE("decoding is deterministic") {
  SceneConfig sc;
  sc.seed = 77;
  NoiseConfig noise;
  noise.heat_sigma = 0.05f;
  noise.embed_sigma = 0.1f;
  noise.n_distractor_peaks = 3;
  noise.seed = 5;
  const NetworkOutput out = simulate_output(generate_scene(sc), noise, 1, 512, 512, 4);
  CHECK(decode(out) == decode(out));
}

TEST_CASE("exhaustive grouping with k = 20 stays within budget") {
  CornerCandidates cands;
  for (auto& list : cands.lists) list.resize(1);
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    for (CornerType type : kCornerTypes) {
      const bool right = type == CornerType::kTR || type == CornerType::kBR;
      const bool bottom = type == CornerType::kBL || type == CornerType::kBR;
      const Point2 p{float((right ? 300 : 20) + rng.uniform(0, 150)),
                     float((bottom ? 300 : 20) + rng.uniform(0, 150))};
      cands.lists[index_of(type)][0].push_back(
          candidate(type, p, float(rng.uniform(0.1, 1.0)), float(rng.uniform(0, 0.4))));
    }
  }
  const auto start = std::chrono::steady_clock::now();
  const auto dets = group_and_score(cands);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(!dets.empty());
  CHECK(seconds < 1.0);
}

TEST_CASE("decode config validation") {
  DecodeConfig cfg;
  cfg.k = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.embed_tol = -1.0f;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.det_nms_iou = 1.5f;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

}  // namespace
}  // namespace tetradec
