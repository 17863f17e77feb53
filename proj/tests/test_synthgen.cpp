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
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "tetradec/decoder.hpp"
#include "tetradec/error.hpp"
#include "tetradec/losses.hpp"
#include "tetradec/rng.hpp"
#include "tetradec/synthgen.hpp"

namespace tetradec {
namespace {

// Published splitmix64 and xoshiro256** step functions, written out again so
// the generator is checked against something other than itself.
uint64_t ref_splitmix(uint64_t& x) {
  uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct RefXoshiro {
  uint64_t s[4];
  explicit RefXoshiro(uint64_t seed) {
    for (auto& w : s) w = ref_splitmix(seed);
  }
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  uint64_t next() {
    const uint64_t result = rotl(s[1] * 5, 7) * 9;
    const uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return result;
  }
};

bool is_axis_aligned(const Tetragon& t) {
  return t.tl.y == t.tr.y && t.bl.y == t.br.y && t.tl.x == t.bl.x && t.tr.x == t.br.x &&
         t.tl.x < t.tr.x && t.tl.y < t.bl.y;
}

bool inside_image(const Tetragon& t, uint32_t w, uint32_t h) {
  for (const Point2& p : t.polygon()) {
    if (!(p.x >= 0 && p.y >= 0 && p.x < w && p.y < h)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("splitmix64 matches the published first outputs for seed 0") {
  uint64_t x = 0;
  CHECK(ref_splitmix(x) == 0xe220a8397b1dcdafULL);
  CHECK(ref_splitmix(x) == 0x6e789e6aa1b965f4ULL);
}

TEST_CASE("rng stream equals the reference generator") {
  for (uint64_t seed : {0ULL, 1ULL, 42ULL, 0xffffffffffffffffULL}) {
    Rng rng(seed);
    RefXoshiro ref(seed);
    for (int i = 0; i < 1000; ++i) REQUIRE(rng.next_u64() == ref.next());
  }
}

TEST_CASE("rng draws stay in range") {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    const int64_t k = rng.uniform_int(-3, 5);
    REQUIRE(k >= -3);
    REQUIRE(k <= 5);
  }
  CHECK(rng.uniform_int(4, 4) == 4);
}

TEST_CASE("normal draws have unit moments") {
  Rng rng(11);
  constexpr int kN = 200000;
  double sum = 0, sq = 0;
  for (int i = 0; i < kN; ++i) {
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / kN) < 0.01);
  CHECK(std::abs(sq / kN - 1.0) < 0.02);
}

TEST_CASE("derived seeds are distinct across streams and bases") {
  std::set<uint64_t> seen;
  for (uint64_t base = 0; base < 20; ++base) {
    for (uint64_t stream = 0; stream < 500; ++stream) {
      seen.insert(Rng::derive_seed(base, stream));
    }
  }
  CHECK(seen.size() == 20u * 500u);
  CHECK(Rng::derive_seed(5, 9) == Rng::derive_seed(5, 9));
}

TEST_CASE("zero warp gives axis-aligned rectangles") {
  for (uint64_t seed = 0; seed < 50; ++seed) {
    SceneConfig cfg;
    cfg.warp_strength = 0.0f;
    cfg.seed = seed;
    for (const Annotation& a : generate_scene(cfg)) REQUIRE(is_axis_aligned(a.tetragon));
  }
}

TEST_CASE("same seed gives the same scene") {
  SceneConfig cfg;
  cfg.seed = 1234;
  CHECK(generate_scene(cfg) == generate_scene(cfg));
  SceneConfig other = cfg;
  other.seed = 1235;
  CHECK(generate_scene(cfg) != generate_scene(other));
}

TEST_CASE("warped scenes are valid, in bounds, sized and separated") {
  size_t objects = 0;
  for (uint64_t seed = 0; seed < 1000; ++seed) {
    SceneConfig cfg;
    cfg.warp_strength = 0.2f;
    cfg.num_classes = 3;
    cfg.seed = seed;
    const auto scene = generate_scene(cfg);
    REQUIRE(scene.size() >= cfg.min_objects);
    REQUIRE(scene.size() <= cfg.max_objects);
    for (size_t i = 0; i < scene.size(); ++i) {
      const Tetragon& t = scene[i].tetragon;
      REQUIRE(oracle::valid(t));
      REQUIRE(is_valid(t));
      REQUIRE(inside_image(t, cfg.img_w, cfg.img_h));
      REQUIRE(area(t) >= cfg.min_area);
      REQUIRE(scene[i].class_id < cfg.num_classes);
      for (size_t j = 0; j < i; ++j) {
        REQUIRE(tetragon_iou(t, scene[j].tetragon) == 0.0);
      }
      ++objects;
    }
  }
  CHECK(objects > 1000u);
}

TEST_CASE("dataset images use derived seeds and sequential ids") {
  SceneConfig cfg;
  cfg.seed = 3;
  const auto images = generate_dataset(cfg, 3);
  REQUIRE(images.size() == 3u);
  CHECK(images[0].id == "img_000000");
  CHECK(images[2].id == "img_000002");
  SceneConfig second = cfg;
  second.seed = Rng::derive_seed(3, 1);
  CHECK(images[1].objects == generate_scene(second));
  CHECK(images[1].width == cfg.img_w);
}

TEST_CASE("infeasible and invalid configurations are rejected") {
  SceneConfig cfg;
  cfg.img_w = cfg.img_h = 64;
  cfg.min_area = 10000.0f;
  try {
    generate_scene(cfg);
    FAIL("expected ConfigInfeasible");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kConfigInfeasible);
  }
  SceneConfig bad;
  bad.warp_strength = 0.5f;
  CHECK_THROWS_AS(generate_scene(bad), Error);
  bad = SceneConfig{};
  bad.min_objects = 5;
  bad.max_objects = 2;
  CHECK_THROWS_AS(generate_scene(bad), Error);
  CHECK_THROWS_AS(simulate_output({}, NoiseConfig{-1.0f}, 1, 64, 64, 4), Error);
}

TEST_CASE("zero noise reproduces the encoder targets exactly") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    SceneConfig cfg;
    cfg.num_classes = 2;
    cfg.seed = seed;
    const auto scene = generate_scene(cfg);
    const TargetMaps gt = encode_targets(scene, 2, cfg.img_w, cfg.img_h, 4);
    const NetworkOutput out = simulate_output(scene, NoiseConfig{}, 2, cfg.img_w, cfg.img_h, 4);
    REQUIRE(out.heat.shape() == gt.heat.shape());
    CHECK(out.heat.values() == gt.heat.values());
    CHECK(out.offset.values() == gt.offset.values());
    const size_t plane = gt.height() * gt.width();
    for (size_t k = 0; k < gt.objects.size(); ++k) {
      for (int t = 0; t < 4; ++t) {
        const Cell& c = gt.objects[k].cells[t];
        CHECK(out.embed[t * plane + c.row * gt.width() + c.col] ==
              static_cast<float>(k * kEmbeddingSpacing));
      }
    }
  }
}

TEST_CASE("noise-free embeddings leave no push loss") {
  SceneConfig cfg;
  cfg.min_objects = cfg.max_objects = 2;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    cfg.seed = seed;
    const auto scene = generate_scene(cfg);
    const TargetMaps gt = encode_targets(scene, 1, cfg.img_w, cfg.img_h, 4);
    NoiseConfig noise;
    noise.heat_sigma = 0.05f;
    noise.seed = seed;
    const NetworkOutput out = simulate_output(scene, noise, 1, cfg.img_w, cfg.img_h, 4);
    CHECK(push_loss(out.embed, gt.objects) == 0.0);
    CHECK(pull_loss(out.embed, gt.objects) == 0.0);
  }
}

TEST_CASE("noise changes every channel and stays in range") {
  SceneConfig cfg;
  cfg.seed = 9;
  const auto scene = generate_scene(cfg);
  NoiseConfig noise{0.1f, 0.2f, 0.05f, 4, 77};
  const NetworkOutput a = simulate_output(scene, noise, 1, 512, 512, 4);
  const NetworkOutput b = simulate_output(scene, noise, 1, 512, 512, 4);
  CHECK(a.heat.values() == b.heat.values());
  CHECK(a.embed.values() == b.embed.values());
  CHECK(a.offset.values() == b.offset.values());
  for (float v : a.heat.values()) {
    REQUIRE(v >= 0.0f);
    REQUIRE(v <= 1.0f);
  }
  const TargetMaps gt = encode_targets(scene, 1, 512, 512, 4);
  CHECK(a.heat.values() != gt.heat.values());
  CHECK(a.offset.values() != gt.offset.values());
  for (float v : a.embed.values()) {
    REQUIRE(v >= -10.0f);
    REQUIRE(v <= 10.0f + 5 * kEmbeddingSpacing);
  }
}

TEST_CASE("noisy benchmark recalls every object at IoU 0.9") {
  size_t objects = 0, recalled = 0;
  for (uint64_t seed = 0; seed < 200; ++seed) {
    SceneConfig cfg;
    cfg.seed = seed;
    const auto scene = generate_scene(cfg);
    NoiseConfig noise;
    noise.heat_sigma = 0.05f;
    noise.n_distractor_peaks = 3;
    noise.seed = Rng::derive_seed(seed, 1);
    const auto dets = decode(simulate_output(scene, noise, 1, cfg.img_w, cfg.img_h, 4));
    for (const Annotation& a : scene) {
      ++objects;
      for (const Detection& d : dets) {
        if (tetragon_iou(a.tetragon, d.tetragon) >= 0.9) {
          ++recalled;
          break;
        }
      }
    }
  }
  CHECK(recalled == objects);
}

}  // namespace tetradec
