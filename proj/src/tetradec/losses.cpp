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
#include "tetradec/losses.hpp"

#include <algorithm>
#include <cmath>

#include "tetradec/error.hpp"
#include "tetradec/rng.hpp"

namespace tetradec {

namespace {

void require_shape(const Tensor& t, const std::vector<size_t>& shape,
                   const char* what) {
  if (t.shape() != shape) {
    Tensor expected(shape);
    throw Error(ErrorCode::kShapeMismatch,
                std::string(what) + ": expected shape " +
                    expected.shape_string() + ", got " + t.shape_string());
  }
}

void reset_grad(std::vector<double>* grad, size_t n) {
  if (grad) grad->assign(n, 0.0);
}

size_t embed_index(const Tensor& embed, int type, const Cell& cell) {
  return (type * embed.dim(1) + cell.row) * embed.dim(2) + cell.col;
}

void check_embed_cells(const Tensor& embed,
                       std::span<const ObjectCorners> objects) {
  require_ndim(embed, 3, "embedding maps");
  if (embed.dim(0) != 4) {
    throw Error(ErrorCode::kShapeMismatch,
                "embedding maps need 4 corner planes, got " +
                    embed.shape_string());
  }
  for (const ObjectCorners& obj : objects) {
    for (const Cell& c : obj.cells) {
      if (c.row >= embed.dim(1) || c.col >= embed.dim(2)) {
        throw Error(ErrorCode::kShapeMismatch,
                    "object corner cell outside the embedding maps");
      }
    }
  }
}

double object_mean(const Tensor& embed, const ObjectCorners& obj) {
  double s = 0.0;
  for (int t = 0; t < 4; ++t) s += embed[embed_index(embed, t, obj.cells[t])];
  return s / 4.0;
}

}  // namespace

void NetworkOutput::validate() const {
  require_ndim(heat, 4, "heat");
  if (heat.dim(0) != 4) {
    throw Error(ErrorCode::kShapeMismatch,
                "heat needs 4 corner types, got " + heat.shape_string());
  }
  const size_t h = heat.dim(2), w = heat.dim(3);
  require_shape(embed, {4, h, w}, "embedding maps");
  require_shape(offset, {4, 2, h, w}, "offset maps");
  if (stride < 1) throw Error(ErrorCode::kInvalidArgument, "stride must be >= 1");
}

double detection_loss(const Tensor& pred_heat, const TargetMaps& gt,
                      float alpha, float beta, std::vector<double>* grad) {
  require_shape(pred_heat, gt.heat.shape(), "detection_loss");
  const double n = std::max<double>(1.0, static_cast<double>(gt.objects.size()));
  const double a = alpha, b = beta;
  reset_grad(grad, pred_heat.size());
  double sum = 0.0;
  for (size_t i = 0; i < pred_heat.size(); ++i) {
    const double raw = pred_heat[i];
    const double p = std::clamp(raw, kProbEpsilon, 1.0 - kProbEpsilon);
    const bool clamped = p != raw;
    const double y = gt.heat[i];
    if (gt.heat[i] == 1.0f) {
      const double q = 1.0 - p;
      sum += std::pow(q, a) * std::log(p);
      if (grad && !clamped) {
        const double d = -a * std::pow(q, a - 1.0) * std::log(p) +
                         std::pow(q, a) / p;
        (*grad)[i] = -d / n;
      }
    } else {
      const double weight = std::pow(1.0 - y, b);
      sum += weight * std::pow(p, a) * std::log(1.0 - p);
      if (grad && !clamped) {
        const double d = weight * (a * std::pow(p, a - 1.0) * std::log(1.0 - p) -
                                   std::pow(p, a) / (1.0 - p));
        (*grad)[i] = -d / n;
      }
    }
  }
  return -sum / n;
}

double offset_loss(const Tensor& pred_offset, const TargetMaps& gt,
                   std::vector<double>* grad) {
  require_shape(pred_offset, gt.offset.shape(), "offset_loss");
  reset_grad(grad, pred_offset.size());
  if (gt.objects.empty()) return 0.0;
  const size_t h = pred_offset.dim(2), w = pred_offset.dim(3);
  const double count = 4.0 * static_cast<double>(gt.objects.size());
  double sum = 0.0;
  for (const ObjectCorners& obj : gt.objects) {
    for (int t = 0; t < 4; ++t) {
      const Cell& cell = obj.cells[t];
      const double target[2] = {obj.subpixel[t].x, obj.subpixel[t].y};
      for (int axis = 0; axis < 2; ++axis) {
        const size_t idx = ((t * 2 + axis) * h + cell.row) * w + cell.col;
        const double d = pred_offset[idx] - target[axis];
        const double ad = std::abs(d);
        if (ad < 1.0) {
          sum += 0.5 * d * d;
          if (grad) (*grad)[idx] += d / count;
        } else {
          sum += ad - 0.5;
          if (grad) (*grad)[idx] += (d > 0 ? 1.0 : -1.0) / count;
        }
      }
    }
  }
  return sum / count;
}

double pull_loss(const Tensor& embed, std::span<const ObjectCorners> objects,
                 std::vector<double>* grad) {
  check_embed_cells(embed, objects);
  reset_grad(grad, embed.size());
  if (objects.empty()) return 0.0;
  const double n = static_cast<double>(objects.size());
  double sum = 0.0;
  for (const ObjectCorners& obj : objects) {
    const double mean = object_mean(embed, obj);
    for (int t = 0; t < 4; ++t) {
      const size_t idx = embed_index(embed, t, obj.cells[t]);
      const double d = embed[idx] - mean;
      sum += d * d;
      // The mean's own dependence cancels since the deviations sum to zero.
      if (grad) (*grad)[idx] += 2.0 * d / n;
    }
  }
  return sum / n;
}

double push_loss(const Tensor& embed, std::span<const ObjectCorners> objects,
                 std::vector<double>* grad) {
  check_embed_cells(embed, objects);
  reset_grad(grad, embed.size());
  const size_t n = objects.size();
  if (n < 2) return 0.0;
  std::vector<double> means(n);
  for (size_t k = 0; k < n; ++k) means[k] = object_mean(embed, objects[k]);
  const double norm = static_cast<double>(n) * static_cast<double>(n - 1);
  double sum = 0.0;
  std::vector<double> mean_grad(n, 0.0);
  for (size_t k = 0; k < n; ++k) {
    for (size_t j = 0; j < n; ++j) {
      if (j == k) continue;
      const double d = means[k] - means[j];
      const double margin = 1.0 - std::abs(d);
      if (margin > 0.0) {
        sum += margin;
        const double s = (d > 0) - (d < 0);
        mean_grad[k] -= s / norm;
        mean_grad[j] += s / norm;
      }
    }
  }
  if (grad) {
    for (size_t k = 0; k < n; ++k) {
      for (int t = 0; t < 4; ++t) {
        (*grad)[embed_index(embed, t, objects[k].cells[t])] += mean_grad[k] / 4.0;
      }
    }
  }
  return sum / norm;
}

LossBreakdown total_loss(const NetworkOutput& pred, const TargetMaps& gt,
                         const LossWeights& w) {
  pred.validate();
  LossBreakdown out;
  out.det = detection_loss(pred.heat, gt, w.alpha, w.beta);
  out.off = offset_loss(pred.offset, gt);
  out.pull = pull_loss(pred.embed, gt.objects);
  out.push = push_loss(pred.embed, gt.objects);
  out.total = out.det + w.w_off * out.off + w.w_pull * out.pull +
              w.w_push * out.push;
  return out;
}

const char* loss_component_name(LossComponent c) {
  switch (c) {
    case LossComponent::kDetection: return "detection";
    case LossComponent::kOffset: return "offset";
    case LossComponent::kPull: return "pull";
    case LossComponent::kPush: return "push";
    case LossComponent::kTotal: return "total";
  }
  return "?";
}

GradCheckInputs random_gradcheck_inputs(uint64_t seed, uint16_t num_classes) {
  Rng rng(seed);
  constexpr uint32_t kImage = 32;
  constexpr uint32_t kStride = 4;

  // One object in each half of the image so corner cells stay distinct.
  std::vector<Annotation> anns;
  for (int k = 0; k < 2; ++k) {
    const float x0 = static_cast<float>(k * 16 + rng.uniform(0.0, 3.0));
    const float x1 = static_cast<float>(k * 16 + rng.uniform(10.0, 15.0));
    const float y0 = static_cast<float>(rng.uniform(0.0, 8.0));
    const float y1 = static_cast<float>(rng.uniform(18.0, 31.0));
    Annotation ann;
    ann.class_id = static_cast<uint16_t>(rng.uniform_int(0, num_classes - 1));
    ann.tetragon = {{x0, y0}, {x1, y0 + 1.0f}, {x0 + 0.5f, y1}, {x1, y1 - 1.0f}};
    anns.push_back(ann);
  }

  GradCheckInputs in;
  in.gt = encode_targets(anns, num_classes, kImage, kImage, kStride);
  in.pred.stride = kStride;
  in.pred.heat = Tensor(in.gt.heat.shape());
  for (float& v : in.pred.heat.values()) v = static_cast<float>(rng.uniform(0.1, 0.9));

  in.pred.offset = Tensor(in.gt.offset.shape());
  for (float& v : in.pred.offset.values()) v = static_cast<float>(rng.uniform());
  const size_t h = in.gt.height(), w = in.gt.width();
  for (const ObjectCorners& obj : in.gt.objects) {
    for (int t = 0; t < 4; ++t) {
      const double target[2] = {obj.subpixel[t].x, obj.subpixel[t].y};
      for (int axis = 0; axis < 2; ++axis) {
        // Half the errors on the quadratic branch, half on the linear one.
        const double mag = rng.uniform() < 0.5 ? rng.uniform(0.05, 0.8)
                                               : rng.uniform(1.2, 2.0);
        const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        in.pred.offset[((t * 2 + axis) * h + obj.cells[t].row) * w +
                       obj.cells[t].col] = static_cast<float>(target[axis] + sign * mag);
      }
    }
  }

  in.pred.embed = Tensor({4, h, w});
  for (;;) {
    for (float& v : in.pred.embed.values()) v = static_cast<float>(rng.normal());
    const double centers[2] = {0.0, rng.uniform(0.0, 1.2)};
    for (size_t k = 0; k < in.gt.objects.size(); ++k) {
      for (int t = 0; t < 4; ++t) {
        in.pred.embed[embed_index(in.pred.embed, t, in.gt.objects[k].cells[t])] =
            static_cast<float>(centers[k] + rng.uniform(-0.5, 0.5));
      }
    }
    // Stay clear of the hinge corner and the |d| = 0 kink.
    const double d = std::abs(object_mean(in.pred.embed, in.gt.objects[0]) -
                              object_mean(in.pred.embed, in.gt.objects[1]));
    if (d > 0.05 && std::abs(d - 1.0) > 0.05) break;
  }
  return in;
}

namespace {

enum class Target { kHeat, kOffset, kEmbed };

double evaluate(LossComponent component, const GradCheckInputs& in,
                const NetworkOutput& pred) {
  switch (component) {
    case LossComponent::kDetection:
      return detection_loss(pred.heat, in.gt, in.weights.alpha, in.weights.beta);
    case LossComponent::kOffset: return offset_loss(pred.offset, in.gt);
    case LossComponent::kPull: return pull_loss(pred.embed, in.gt.objects);
    case LossComponent::kPush: return push_loss(pred.embed, in.gt.objects);
    case LossComponent::kTotal: return total_loss(pred, in.gt, in.weights).total;
  }
  return 0.0;
}

std::vector<double> analytic(LossComponent component, const GradCheckInputs& in,
                             Target target) {
  const NetworkOutput& p = in.pred;
  const LossWeights& w = in.weights;
  std::vector<double> g, extra;
  switch (target) {
    case Target::kHeat:
      detection_loss(p.heat, in.gt, w.alpha, w.beta, &g);
      break;
    case Target::kOffset:
      offset_loss(p.offset, in.gt, &g);
      if (component == LossComponent::kTotal) {
        for (double& v : g) v *= w.w_off;
      }
      break;
    case Target::kEmbed:
      if (component == LossComponent::kPull) {
        pull_loss(p.embed, in.gt.objects, &g);
      } else if (component == LossComponent::kPush) {
        push_loss(p.embed, in.gt.objects, &g);
      } else {
        pull_loss(p.embed, in.gt.objects, &g);
        push_loss(p.embed, in.gt.objects, &extra);
        for (size_t i = 0; i < g.size(); ++i) {
          g[i] = w.w_pull * g[i] + w.w_push * extra[i];
        }
      }
      break;
  }
  return g;
}

Tensor& tensor_of(NetworkOutput& out, Target target) {
  switch (target) {
    case Target::kHeat: return out.heat;
    case Target::kOffset: return out.offset;
    case Target::kEmbed: break;
  }
  return out.embed;
}

}  // namespace

double gradient_check(LossComponent component, const GradCheckInputs& inputs,
                      double h) {
  std::vector<Target> targets;
  switch (component) {
    case LossComponent::kDetection: targets = {Target::kHeat}; break;
    case LossComponent::kOffset: targets = {Target::kOffset}; break;
    case LossComponent::kPull:
    case LossComponent::kPush: targets = {Target::kEmbed}; break;
    case LossComponent::kTotal:
      targets = {Target::kHeat, Target::kOffset, Target::kEmbed};
      break;
  }
  double worst = 0.0;
  NetworkOutput probe = inputs.pred;
  for (Target target : targets) {
    const std::vector<double> grad = analytic(component, inputs, target);
    Tensor& t = tensor_of(probe, target);
    for (size_t i = 0; i < t.size(); ++i) {
      const float original = t[i];
      // Use the representable step actually taken, not the nominal h.
      const float plus = static_cast<float>(original + h);
      const float minus = static_cast<float>(original - h);
      t[i] = plus;
      const double f_plus = evaluate(component, inputs, probe);
      t[i] = minus;
      const double f_minus = evaluate(component, inputs, probe);
      t[i] = original;
      const double numeric =
          (f_plus - f_minus) / (static_cast<double>(plus) - minus);
      const double rel =
          std::abs(grad[i] - numeric) / std::max(1e-8, std::abs(numeric));
      worst = std::max(worst, rel);
    }
  }
  return worst;
}

}  // namespace tetradec
