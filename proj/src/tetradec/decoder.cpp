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
#include "tetradec/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tetradec/error.hpp"
#include "tetradec/tensor.hpp"

namespace tetradec {

namespace {

constexpr int kTL = 0, kTR = 1, kBL = 2, kBR = 3;

struct Quad {
  double score;
  float mean_embedding;
  std::array<uint32_t, 4> index;  // positions in the per-type candidate lists
};

bool cell_less(const Cell& a, const Cell& b) {
  return a.row != b.row ? a.row < b.row : a.col < b.col;
}

bool embeddings_close(std::initializer_list<float> values, float tol) {
  const auto [lo, hi] = std::minmax(values);
  return hi - lo <= tol;
}

// Shared tail of both grouping modes: evaluates one quadruple and appends it
// when it passes the validity and embedding constraints.
void consider(const std::array<const std::vector<CornerCandidate>*, 4>& lists,
              const std::array<uint32_t, 4>& idx, const DecodeConfig& cfg,
              std::vector<Quad>& out) {
  std::array<CornerCandidate, 4> q;
  for (int t = 0; t < 4; ++t) q[t] = (*lists[t])[idx[t]];
  if (!embeddings_close({q[0].embedding, q[1].embedding, q[2].embedding,
                         q[3].embedding},
                        cfg.embed_tol)) {
    return;
  }
  if (!is_valid(q[kTL].refined, q[kTR].refined, q[kBL].refined,
                q[kBR].refined)) {
    return;
  }
  float mean = 0.0f;
  const float score = quadruple_score(q, cfg.score_sign, &mean);
  out.push_back({score, mean, idx});
}

void enumerate_exhaustive(
    const std::array<const std::vector<CornerCandidate>*, 4>& lists,
    const DecodeConfig& cfg, std::vector<Quad>& out) {
  const auto& tls = *lists[kTL];
  const auto& trs = *lists[kTR];
  const auto& bls = *lists[kBL];
  const auto& brs = *lists[kBR];
  const float tol = cfg.embed_tol;
  for (uint32_t a = 0; a < tls.size(); ++a) {
    const CornerCandidate& tl = tls[a];
    for (uint32_t b = 0; b < trs.size(); ++b) {
      const CornerCandidate& tr = trs[b];
      if (!(tl.refined.x < tr.refined.x)) continue;
      if (!embeddings_close({tl.embedding, tr.embedding}, tol)) continue;
      for (uint32_t c = 0; c < bls.size(); ++c) {
        const CornerCandidate& bl = bls[c];
        if (!(tl.refined.y < bl.refined.y)) continue;
        if (!embeddings_close({tl.embedding, tr.embedding, bl.embedding}, tol)) {
          continue;
        }
        for (uint32_t d = 0; d < brs.size(); ++d) {
          const CornerCandidate& br = brs[d];
          if (!(bl.refined.x < br.refined.x && tr.refined.y < br.refined.y)) {
            continue;
          }
          consider(lists, {a, b, c, d}, cfg, out);
        }
      }
    }
  }
}

void enumerate_greedy_anchor(
    const std::array<const std::vector<CornerCandidate>*, 4>& lists,
    const DecodeConfig& cfg, std::vector<Quad>& out) {
  const auto& tls = *lists[kTL];
  for (uint32_t a = 0; a < tls.size(); ++a) {
    const CornerCandidate& tl = tls[a];
    std::array<uint32_t, 4> idx{a, 0, 0, 0};
    bool complete = true;
    for (int t : {kTR, kBL, kBR}) {
      const auto& list = *lists[t];
      float best = std::numeric_limits<float>::infinity();
      bool found = false;
      for (uint32_t i = 0; i < list.size(); ++i) {
        const Point2& p = list[i].refined;
        const bool compatible =
            (t == kTR && tl.refined.x < p.x) || (t == kBL && tl.refined.y < p.y) ||
            (t == kBR && tl.refined.x < p.x && tl.refined.y < p.y);
        if (!compatible) continue;
        const float dist = std::abs(list[i].embedding - tl.embedding);
        if (dist < best) {
          best = dist;
          idx[t] = i;
          found = true;
        }
      }
      if (!found) {
        complete = false;
        break;
      }
    }
    if (complete) consider(lists, idx, cfg, out);
  }
}

}  // namespace

void DecodeConfig::validate() const {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  auto unit = [](float v) { return v >= 0.0f && v <= 1.0f; };
  if (!unit(heat_floor) || !unit(embed_tol) || !unit(det_nms_iou)) {
    throw Error(ErrorCode::kInvalidArgument,
                "decode thresholds must lie in [0, 1]");
  }
  if (nms_window < 1 || nms_window % 2 == 0) {
    throw Error(ErrorCode::kInvalidArgument, "nms window must be odd");
  }
}

size_t CornerCandidates::total() const {
  size_t n = 0;
  for (const auto& per_type : lists) {
    for (const auto& per_class : per_type) n += per_class.size();
  }
  return n;
}

CornerCandidates extract_corners(const NetworkOutput& out,
                                 const DecodeConfig& cfg) {
  out.validate();
  cfg.validate();
  const size_t classes = out.num_classes(), h = out.height(), w = out.width();
  const size_t plane = h * w;
  const float stride = static_cast<float>(out.stride);
  CornerCandidates result;
  for (CornerType type : kCornerTypes) {
    const int t = index_of(type);
    result.lists[t].resize(classes);
    for (size_t c = 0; c < classes; ++c) {
      const auto begin = out.heat.values().begin() + (t * classes + c) * plane;
      Tensor slice({h, w}, std::vector<float>(begin, begin + plane));
      const Tensor peaks = nms(slice, cfg.nms_window);
      auto& list = result.lists[t][c];
      for (const Peak& p : topk(peaks, cfg.k)) {
        if (!(p.value >= cfg.heat_floor) || p.value <= 0.0f) continue;
        const size_t at = p.row * w + p.col;
        CornerCandidate cand;
        cand.corner_type = type;
        cand.class_id = static_cast<uint16_t>(c);
        cand.cell = {p.row, p.col};
        cand.heat = p.value;
        cand.embedding = out.embed[t * plane + at];
        const float dx = out.offset[(t * 2 + 0) * plane + at];
        const float dy = out.offset[(t * 2 + 1) * plane + at];
        cand.refined = {(static_cast<float>(p.col) + dx) * stride,
                        (static_cast<float>(p.row) + dy) * stride};
        list.push_back(cand);
      }
    }
  }
  return result;
}

float quadruple_score(const std::array<CornerCandidate, 4>& q, ScoreSign sign,
                      float* mean_embedding) {
  double heat = 0.0, mean = 0.0;
  for (const CornerCandidate& c : q) {
    heat += c.heat;
    mean += c.embedding;
  }
  mean /= 4.0;
  double spread = 0.0;
  for (const CornerCandidate& c : q) {
    const double d = c.embedding - mean;
    spread += d * d;
  }
  if (mean_embedding) *mean_embedding = static_cast<float>(mean);
  const double s = sign == ScoreSign::kSubtractPull ? -1.0 : 1.0;
  return static_cast<float>(heat / 4.0 + s * spread / 4.0);
}

std::vector<Detection> group_and_score(const CornerCandidates& cands,
                                       const DecodeConfig& cfg) {
  cfg.validate();
  std::vector<Detection> all;
  for (size_t c = 0; c < cands.num_classes(); ++c) {
    const std::array<const std::vector<CornerCandidate>*, 4> lists = {
        &cands.lists[kTL][c], &cands.lists[kTR][c], &cands.lists[kBL][c],
        &cands.lists[kBR][c]};
    if (std::any_of(lists.begin(), lists.end(),
                    [](const auto* l) { return l->empty(); })) {
      continue;
    }
    std::vector<Quad> quads;
    if (cfg.grouping == GroupingMode::kExhaustive) {
      enumerate_exhaustive(lists, cfg, quads);
    } else {
      enumerate_greedy_anchor(lists, cfg, quads);
    }
    // Score descending; ties by the corner cells in row-major order.
    std::sort(quads.begin(), quads.end(), [&](const Quad& a, const Quad& b) {
      if (a.score != b.score) return a.score > b.score;
      for (int t = 0; t < 4; ++t) {
        const Cell& ca = (*lists[t])[a.index[t]].cell;
        const Cell& cb = (*lists[t])[b.index[t]].cell;
        if (ca != cb) return cell_less(ca, cb);
      }
      return a.index < b.index;
    });

    std::array<std::vector<bool>, 4> used;
    for (int t = 0; t < 4; ++t) used[t].assign(lists[t]->size(), false);
    const size_t first = all.size();
    for (const Quad& q : quads) {
      bool free = true;
      for (int t = 0; t < 4; ++t) free = free && !used[t][q.index[t]];
      if (!free) continue;
      Detection det;
      det.class_id = static_cast<uint16_t>(c);
      for (int t = 0; t < 4; ++t) det.corners[t] = (*lists[t])[q.index[t]];
      det.tetragon = {det.corners[kTL].refined, det.corners[kTR].refined,
                      det.corners[kBL].refined, det.corners[kBR].refined};
      bool suppressed = false;
      for (size_t i = first; i < all.size() && !suppressed; ++i) {
        suppressed = tetragon_iou(all[i].tetragon, det.tetragon) > cfg.det_nms_iou;
      }
      if (suppressed) continue;
      det.score = static_cast<float>(q.score);
      det.mean_embedding = q.mean_embedding;
      for (int t = 0; t < 4; ++t) used[t][q.index[t]] = true;
      all.push_back(det);
    }
  }
  // Classes were appended in id order; a stable sort keeps that as tie-break.
  std::stable_sort(all.begin(), all.end(),
                   [](const Detection& a, const Detection& b) {
                     return a.score > b.score;
                   });
  return all;
}

std::vector<Detection> decode(const NetworkOutput& out, const DecodeConfig& cfg) {
  return group_and_score(extract_corners(out, cfg), cfg);
}

}  // namespace tetradec
