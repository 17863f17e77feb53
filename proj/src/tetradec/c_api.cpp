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
#include "tetradec/tetradec.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "tetradec/decoder.hpp"
#include "tetradec/error.hpp"
#include "tetradec/evalkit.hpp"
#include "tetradec/geometry.hpp"
#include "tetradec/gt_encoder.hpp"
#include "tetradec/io.hpp"
#include "tetradec/losses.hpp"
#include "tetradec/mask_fit.hpp"
#include "tetradec/render.hpp"
#include "tetradec/rng.hpp"
#include "tetradec/synthgen.hpp"

struct td_tensor {
  tetradec::Tensor value;
};
struct td_dataset {
  tetradec::io::Dataset value;
};
struct td_output {
  tetradec::NetworkOutput value;
  td_tensor heat, embed, offset;  // views for the accessors
  void sync() {
    heat.value = value.heat;
    embed.value = value.embed;
    offset.value = value.offset;
  }
};
struct td_targets {
  tetradec::TargetMaps value;
  td_tensor heat, offset, embed;
};
struct td_detections {
  tetradec::io::DetectionSet value;
};
struct td_mask {
  tetradec::BinaryMask value;
};
struct td_image {
  tetradec::Image value;
};

namespace {

using namespace tetradec;

thread_local std::string g_last_error;

td_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return TD_ERR_INVALID_ARGUMENT;
    case ErrorCode::kShapeError: return TD_ERR_SHAPE;
    case ErrorCode::kShapeMismatch: return TD_ERR_SHAPE_MISMATCH;
    case ErrorCode::kDegenerateGeometry: return TD_ERR_DEGENERATE_GEOMETRY;
    case ErrorCode::kInvalidAnnotation: return TD_ERR_INVALID_ANNOTATION;
    case ErrorCode::kEmptyMask: return TD_ERR_EMPTY_MASK;
    case ErrorCode::kDegenerateMask: return TD_ERR_DEGENERATE_MASK;
    case ErrorCode::kBadGtCardinality: return TD_ERR_BAD_GT_CARDINALITY;
    case ErrorCode::kConfigInfeasible: return TD_ERR_CONFIG_INFEASIBLE;
    case ErrorCode::kMalformedInput: return TD_ERR_MALFORMED_INPUT;
    case ErrorCode::kIoError: return TD_ERR_IO;
  }
  return TD_ERR_INTERNAL;
}

td_status fail(td_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs fn and maps any escaping exception to a status code.
template <typename Fn>
td_status guarded(Fn&& fn) {
  try {
    fn();
    return TD_OK;
  } catch (const Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(TD_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(TD_ERR_INTERNAL, e.what());
  }
}

void require(bool cond, const char* what) {
  if (!cond) throw Error(ErrorCode::kInvalidArgument, what);
}

Point2 from_c(const td_point& p) { return {p.x, p.y}; }
td_point to_c(const Point2& p) { return {p.x, p.y}; }
Tetragon from_c(const td_tetragon& t) {
  return {from_c(t.tl), from_c(t.tr), from_c(t.bl), from_c(t.br)};
}
td_tetragon to_c(const Tetragon& t) {
  return {to_c(t.tl), to_c(t.tr), to_c(t.bl), to_c(t.br)};
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

td_detection to_c(const Detection& d) {
  return {d.class_id, d.score, d.mean_embedding, to_c(d.tetragon)};
}

Detection from_c(const td_detection& d) {
  Detection out;
  out.class_id = d.class_id;
  out.score = d.score;
  out.mean_embedding = d.mean_embedding;
  out.tetragon = from_c(d.tetragon);
  for (CornerType type : kCornerTypes) {
    CornerCandidate& c = out.corners[index_of(type)];
    c.corner_type = type;
    c.class_id = d.class_id;
    c.refined = out.tetragon.corner(type);
    c.embedding = d.mean_embedding;
  }
  return out;
}

const io::ImageRecord& image_at(const td_dataset* ds, size_t image) {
  require(ds != nullptr, "dataset is null");
  if (image >= ds->value.images.size()) {
    throw Error(ErrorCode::kInvalidArgument, "image index out of range");
  }
  return ds->value.images[image];
}

// Pairs ground-truth images with their detections by id.
std::vector<ImageEval> join(const td_detections* dets, const td_dataset* gt) {
  require(dets != nullptr && gt != nullptr, "null argument");
  for (const io::ImageDetections& img : dets->value.images) {
    if (!gt->value.find(img.id)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "detections reference unknown image \"" + img.id + "\"");
    }
  }
  std::vector<ImageEval> images;
  for (const io::ImageRecord& rec : gt->value.images) {
    ImageEval e;
    e.ground_truth = rec.objects;
    if (const io::ImageDetections* d = dets->value.find(rec.id)) e.detections = d->detections;
    images.push_back(std::move(e));
  }
  return images;
}

}  // namespace

extern "C" {

const char* td_last_error(void) { return g_last_error.c_str(); }

const char* td_status_name(td_status status) {
  switch (status) {
    case TD_OK: return "OK";
    case TD_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case TD_ERR_SHAPE: return "ShapeError";
    case TD_ERR_SHAPE_MISMATCH: return "ShapeMismatch";
    case TD_ERR_DEGENERATE_GEOMETRY: return "DegenerateGeometry";
    case TD_ERR_INVALID_ANNOTATION: return "InvalidAnnotation";
    case TD_ERR_EMPTY_MASK: return "EmptyMask";
    case TD_ERR_DEGENERATE_MASK: return "DegenerateMask";
    case TD_ERR_BAD_GT_CARDINALITY: return "BadGtCardinality";
    case TD_ERR_CONFIG_INFEASIBLE: return "ConfigInfeasible";
    case TD_ERR_MALFORMED_INPUT: return "MalformedInput";
    case TD_ERR_IO: return "IoError";
    case TD_ERR_INTERNAL: return "Internal";
  }
  return "Unknown";
}

const char* td_version(void) { return "0.1.0"; }

void td_string_free(char* s) { std::free(s); }

// Geometry.

int td_tetragon_is_valid(const td_tetragon* t) {
  return t != nullptr && is_valid(from_c(*t)) ? 1 : 0;
}

td_status td_tetragon_area(const td_tetragon* t, double* out) {
  return guarded([&] {
    require(t && out, "null argument");
    *out = area(from_c(*t));
  });
}

td_status td_tetragon_iou(const td_tetragon* a, const td_tetragon* b, double* out) {
  return guarded([&] {
    require(a && b && out, "null argument");
    const Tetragon ta = from_c(*a), tb = from_c(*b);
    require(is_valid(ta) && is_valid(tb), "tetragon is not valid");
    *out = tetragon_iou(ta, tb);
  });
}

td_status td_homography_from_tetragon(const td_tetragon* t, uint32_t out_w, uint32_t out_h,
                                      double out[9]) {
  return guarded([&] {
    require(t && out, "null argument");
    const Homography h = homography_from_tetragon(from_c(*t), out_w, out_h);
    std::copy(h.m.begin(), h.m.end(), out);
  });
}

td_status td_tetragon_load(const char* path, td_tetragon* out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = to_c(io::parse_tetragon(io::read_file(path), path));
  });
}

td_status td_tetragon_json(const td_tetragon* t, char** out) {
  return guarded([&] {
    require(t && out, "null argument");
    *out = dup_string(io::format_tetragon(from_c(*t)));
  });
}

// Tensors.

td_status td_tensor_create(const size_t* shape, size_t ndim, td_tensor** out) {
  return guarded([&] {
    require(out && (shape || ndim == 0), "null argument");
    *out = new td_tensor{Tensor(std::vector<size_t>(shape, shape + ndim))};
  });
}

void td_tensor_free(td_tensor* t) { delete t; }
size_t td_tensor_ndim(const td_tensor* t) { return t ? t->value.ndim() : 0; }
size_t td_tensor_dim(const td_tensor* t, size_t axis) {
  return t && axis < t->value.ndim() ? t->value.dim(axis) : 0;
}
size_t td_tensor_size(const td_tensor* t) { return t ? t->value.size() : 0; }
float* td_tensor_data(td_tensor* t) { return t ? t->value.data().data() : nullptr; }
const float* td_tensor_cdata(const td_tensor* t) {
  return t ? t->value.data().data() : nullptr;
}

td_status td_tensor_load(const char* path, td_tensor** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new td_tensor{io::read_tensor_file(path)};
  });
}

td_status td_tensor_save(const td_tensor* t, const char* path) {
  return guarded([&] {
    require(t && path, "null argument");
    io::write_tensor_file(path, t->value);
  });
}

td_status td_corner_pool(const td_tensor* features, td_corner_type type, td_tensor** out) {
  return guarded([&] {
    require(features && out, "null argument");
    require(type >= TD_CORNER_TL && type <= TD_CORNER_BR, "bad corner type");
    *out = new td_tensor{corner_pool(features->value, static_cast<CornerType>(type))};
  });
}

td_status td_nms(const td_tensor* heat, int window, td_tensor** out) {
  return guarded([&] {
    require(heat && out, "null argument");
    *out = new td_tensor{nms(heat->value, window)};
  });
}

// Annotations.

td_status td_dataset_create(td_dataset** out) {
  return guarded([&] {
    require(out, "null argument");
    *out = new td_dataset{};
  });
}

td_status td_dataset_load(const char* path, td_dataset** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new td_dataset{io::read_annotation_file(path)};
  });
}

td_status td_dataset_save(const td_dataset* ds, const char* path) {
  return guarded([&] {
    require(ds && path, "null argument");
    io::write_annotation_file(path, ds->value);
  });
}

void td_dataset_free(td_dataset* ds) { delete ds; }

size_t td_dataset_num_images(const td_dataset* ds) { return ds ? ds->value.images.size() : 0; }

const char* td_dataset_image_id(const td_dataset* ds, size_t image) {
  if (!ds || image >= ds->value.images.size()) return nullptr;
  return ds->value.images[image].id.c_str();
}

td_status td_dataset_image_size(const td_dataset* ds, size_t image, uint32_t* width,
                                uint32_t* height) {
  return guarded([&] {
    const io::ImageRecord& rec = image_at(ds, image);
    if (width) *width = rec.width;
    if (height) *height = rec.height;
  });
}

size_t td_dataset_num_objects(const td_dataset* ds, size_t image) {
  if (!ds || image >= ds->value.images.size()) return 0;
  return ds->value.images[image].objects.size();
}

td_status td_dataset_object(const td_dataset* ds, size_t image, size_t index, td_object* out) {
  return guarded([&] {
    const io::ImageRecord& rec = image_at(ds, image);
    require(out && index < rec.objects.size(), "object index out of range");
    out->class_id = rec.objects[index].class_id;
    out->tetragon = to_c(rec.objects[index].tetragon);
  });
}

td_status td_dataset_add_image(td_dataset* ds, const char* id, uint32_t width, uint32_t height,
                               const td_object* objects, size_t count) {
  return guarded([&] {
    require(ds && id && (objects || count == 0), "null argument");
    io::ImageRecord rec{id, width, height, {}};
    for (size_t i = 0; i < count; ++i) {
      Annotation ann{objects[i].class_id, from_c(objects[i].tetragon)};
      validate_annotation(ann, UINT16_MAX, width, height);
      rec.objects.push_back(ann);
    }
    ds->value.images.push_back(std::move(rec));
  });
}

// Synthetic data.

void td_scene_config_default(td_scene_config* cfg) {
  if (!cfg) return;
  const SceneConfig d;
  *cfg = {d.img_w,         d.img_h,   d.min_objects, d.max_objects, d.warp_strength,
          d.min_area,      d.max_side_fraction, d.min_gap, d.num_classes, d.seed};
}

void td_noise_config_default(td_noise_config* cfg) {
  if (!cfg) return;
  const NoiseConfig d;
  *cfg = {d.heat_sigma, d.embed_sigma, d.offset_sigma, d.n_distractor_peaks, d.seed};
}

uint64_t td_derive_seed(uint64_t base, uint64_t stream) {
  return Rng::derive_seed(base, stream);
}

td_status td_synth_dataset(const td_scene_config* cfg, uint32_t num_images, td_dataset** out) {
  return guarded([&] {
    require(cfg && out, "null argument");
    SceneConfig sc;
    sc.img_w = cfg->img_w;
    sc.img_h = cfg->img_h;
    sc.min_objects = cfg->min_objects;
    sc.max_objects = cfg->max_objects;
    sc.warp_strength = cfg->warp_strength;
    sc.min_area = cfg->min_area;
    sc.max_side_fraction = cfg->max_side_fraction;
    sc.min_gap = cfg->min_gap;
    sc.num_classes = cfg->num_classes;
    sc.seed = cfg->seed;
    auto ds = std::make_unique<td_dataset>();
    for (SyntheticImage& img : generate_dataset(sc, num_images)) {
      ds->value.images.push_back({img.id, img.width, img.height, std::move(img.objects)});
    }
    *out = ds.release();
  });
}

// Network output.

td_status td_output_create(const td_tensor* heat, const td_tensor* embed,
                           const td_tensor* offset, uint32_t stride, td_output** out) {
  return guarded([&] {
    require(heat && embed && offset && out, "null argument");
    auto o = std::make_unique<td_output>();
    o->value = {heat->value, embed->value, offset->value, stride};
    o->value.validate();
    o->sync();
    *out = o.release();
  });
}

td_status td_output_load(const char* prefix, uint32_t stride, td_output** out) {
  return guarded([&] {
    require(prefix && out, "null argument");
    const std::string p = prefix;
    auto o = std::make_unique<td_output>();
    o->value.heat = io::read_tensor_file(p + ".heat.tensor");
    o->value.embed = io::read_tensor_file(p + ".embed.tensor");
    o->value.offset = io::read_tensor_file(p + ".offset.tensor");
    o->value.stride = stride;
    o->value.validate();
    o->sync();
    *out = o.release();
  });
}

td_status td_output_save(const td_output* o, const char* prefix) {
  return guarded([&] {
    require(o && prefix, "null argument");
    const std::string p = prefix;
    io::write_tensor_file(p + ".heat.tensor", o->value.heat);
    io::write_tensor_file(p + ".embed.tensor", o->value.embed);
    io::write_tensor_file(p + ".offset.tensor", o->value.offset);
  });
}

void td_output_free(td_output* o) { delete o; }
const td_tensor* td_output_heat(const td_output* o) { return o ? &o->heat : nullptr; }
const td_tensor* td_output_embed(const td_output* o) { return o ? &o->embed : nullptr; }
const td_tensor* td_output_offset(const td_output* o) { return o ? &o->offset : nullptr; }

td_status td_simulate_output(const td_dataset* ds, size_t image, const td_noise_config* noise,
                             uint16_t num_classes, uint32_t stride, td_output** out) {
  return guarded([&] {
    require(noise && out, "null argument");
    const io::ImageRecord& rec = image_at(ds, image);
    NoiseConfig nc;
    nc.heat_sigma = noise->heat_sigma;
    nc.embed_sigma = noise->embed_sigma;
    nc.offset_sigma = noise->offset_sigma;
    nc.n_distractor_peaks = noise->n_distractor_peaks;
    nc.seed = noise->seed;
    auto o = std::make_unique<td_output>();
    o->value = simulate_output(rec.objects, nc, num_classes, rec.width, rec.height, stride);
    o->sync();
    *out = o.release();
  });
}

// Encoding.

td_status td_encode(const td_dataset* ds, size_t image, uint16_t num_classes, uint32_t stride,
                    td_targets** out) {
  return guarded([&] {
    require(out, "null argument");
    const io::ImageRecord& rec = image_at(ds, image);
    auto t = std::make_unique<td_targets>();
    t->value = encode_targets(rec.objects, num_classes, rec.width, rec.height, stride);
    t->heat.value = t->value.heat;
    t->offset.value = t->value.offset;
    t->embed.value = target_embedding(t->value);
    *out = t.release();
  });
}

void td_targets_free(td_targets* t) { delete t; }
const td_tensor* td_targets_heat(const td_targets* t) { return t ? &t->heat : nullptr; }
const td_tensor* td_targets_offset(const td_targets* t) { return t ? &t->offset : nullptr; }
const td_tensor* td_targets_embed(const td_targets* t) { return t ? &t->embed : nullptr; }
size_t td_targets_num_objects(const td_targets* t) { return t ? t->value.objects.size() : 0; }

td_status td_targets_objects_json(const td_targets* t, char** out) {
  return guarded([&] {
    require(t && out, "null argument");
    *out = dup_string(io::format_target_objects(t->value));
  });
}

td_status td_targets_save(const td_targets* t, const char* prefix) {
  return guarded([&] {
    require(t && prefix, "null argument");
    const std::string p = prefix;
    io::write_tensor_file(p + ".heat.tensor", t->value.heat);
    io::write_tensor_file(p + ".offset.tensor", t->value.offset);
    io::write_tensor_file(p + ".embed.tensor", t->embed.value);
    io::write_file(p + ".objects.json", io::format_target_objects(t->value));
  });
}

// Losses.

void td_loss_weights_default(td_loss_weights* w) {
  if (!w) return;
  const LossWeights d;
  *w = {d.w_off, d.w_pull, d.w_push, d.alpha, d.beta};
}

td_status td_total_loss(const td_output* pred, const td_targets* gt, const td_loss_weights* w,
                        td_loss_breakdown* out) {
  return guarded([&] {
    require(pred && gt && out, "null argument");
    LossWeights lw;
    if (w) lw = {w->w_off, w->w_pull, w->w_push, w->alpha, w->beta};
    const LossBreakdown b = total_loss(pred->value, gt->value, lw);
    *out = {b.total, b.det, b.off, b.pull, b.push};
  });
}

td_status td_gradient_check(td_loss_component component, uint64_t seed, double h,
                            double* max_rel_error) {
  return guarded([&] {
    require(max_rel_error, "null argument");
    require(component >= TD_LOSS_DETECTION && component <= TD_LOSS_TOTAL, "bad component");
    require(h > 0.0, "step must be positive");
    *max_rel_error = gradient_check(static_cast<LossComponent>(component),
                                    random_gradcheck_inputs(seed), h);
  });
}

// Decoding.

void td_decode_config_default(td_decode_config* cfg) {
  if (!cfg) return;
  const DecodeConfig d;
  *cfg = {d.k, d.heat_floor, d.embed_tol, d.det_nms_iou, TD_SCORE_SUBTRACT_PULL,
          d.nms_window, TD_GROUPING_EXHAUSTIVE};
}

td_status td_decode(const td_output* o, const td_decode_config* cfg, td_detection** dets,
                    size_t* count) {
  return guarded([&] {
    require(o && dets && count, "null argument");
    DecodeConfig dc;
    if (cfg) {
      dc.k = cfg->k;
      dc.heat_floor = cfg->heat_floor;
      dc.embed_tol = cfg->embed_tol;
      dc.det_nms_iou = cfg->det_nms_iou;
      dc.score_sign = cfg->score_sign == TD_SCORE_ADD_PULL ? ScoreSign::kAddPull
                                                           : ScoreSign::kSubtractPull;
      dc.nms_window = cfg->nms_window;
      dc.grouping = cfg->grouping == TD_GROUPING_GREEDY_ANCHOR ? GroupingMode::kGreedyAnchor
                                                               : GroupingMode::kExhaustive;
    }
    const std::vector<Detection> found = decode(o->value, dc);
    td_detection* arr = nullptr;
    if (!found.empty()) {
      arr = static_cast<td_detection*>(std::malloc(found.size() * sizeof(td_detection)));
      if (!arr) throw std::bad_alloc();
      for (size_t i = 0; i < found.size(); ++i) arr[i] = to_c(found[i]);
    }
    *dets = arr;
    *count = found.size();
  });
}

void td_detection_array_free(td_detection* dets) { std::free(dets); }

td_status td_detections_create(td_detections** out) {
  return guarded([&] {
    require(out, "null argument");
    *out = new td_detections{};
  });
}

td_status td_detections_load(const char* path, td_detections** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new td_detections{io::read_detection_file(path)};
  });
}

td_status td_detections_save(const td_detections* d, const char* path) {
  return guarded([&] {
    require(d && path, "null argument");
    io::write_detection_file(path, d->value);
  });
}

void td_detections_free(td_detections* d) { delete d; }

td_status td_detections_add_image(td_detections* d, const char* id, const td_detection* dets,
                                  size_t count) {
  return guarded([&] {
    require(d && id && (dets || count == 0), "null argument");
    io::ImageDetections img{id, {}};
    for (size_t i = 0; i < count; ++i) img.detections.push_back(from_c(dets[i]));
    d->value.images.push_back(std::move(img));
  });
}

size_t td_detections_num_images(const td_detections* d) {
  return d ? d->value.images.size() : 0;
}

const char* td_detections_image_id(const td_detections* d, size_t image) {
  if (!d || image >= d->value.images.size()) return nullptr;
  return d->value.images[image].id.c_str();
}

size_t td_detections_count(const td_detections* d, size_t image) {
  if (!d || image >= d->value.images.size()) return 0;
  return d->value.images[image].detections.size();
}

td_status td_detections_get(const td_detections* d, size_t image, size_t index,
                            td_detection* out) {
  return guarded([&] {
    require(d && out, "null argument");
    require(image < d->value.images.size(), "image index out of range");
    const auto& dets = d->value.images[image].detections;
    require(index < dets.size(), "detection index out of range");
    *out = to_c(dets[index]);
  });
}

// Evaluation.

td_status td_evaluate(const td_detections* dets, const td_dataset* gt, unsigned jobs,
                      char** report_json, char** csv) {
  return guarded([&] {
    require(report_json, "null argument");
    const EvalReport report =
        evaluate(join(dets, gt), {kCocoIouThresholds.begin(), kCocoIouThresholds.end()},
                 jobs);
    std::string json = io::format_eval_report(report);
    std::string table = io::format_eval_csv(report);
    *report_json = dup_string(json);
    if (csv) *csv = dup_string(table);
  });
}

td_status td_evaluate_usecase(const td_detections* dets, const td_dataset* gt,
                              char** report_json) {
  return guarded([&] {
    require(report_json, "null argument");
    *report_json = dup_string(io::format_usecase_report(usecase_metrics(join(dets, gt))));
  });
}

// Mask fitting.

td_status td_mask_load(const char* path, td_mask** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new td_mask{io::read_mask(path)};
  });
}

td_status td_mask_create(uint32_t width, uint32_t height, const uint8_t* bits, td_mask** out) {
  return guarded([&] {
    require(out && (bits || size_t{width} * height == 0), "null argument");
    auto m = std::make_unique<td_mask>();
    m->value = BinaryMask(width, height);
    for (size_t i = 0; i < m->value.bits.size(); ++i) m->value.bits[i] = bits[i] ? 1 : 0;
    *out = m.release();
  });
}

void td_mask_free(td_mask* m) { delete m; }

td_status td_fit_tetragon(const td_mask* m, uint32_t max_rounds, td_fit_result* out) {
  return guarded([&] {
    require(m && out, "null argument");
    const FitResult r = fit_tetragon(m->value, max_rounds);
    *out = {to_c(r.tetragon), r.iou, r.initial_iou, r.iterations};
  });
}

td_status td_fit_result_json(const td_fit_result* r, char** out) {
  return guarded([&] {
    require(r && out, "null argument");
    FitResult fr;
    fr.tetragon = from_c(r->tetragon);
    fr.iou = r->iou;
    fr.initial_iou = r->initial_iou;
    fr.iterations = r->iterations;
    *out = dup_string(io::format_fit_result(fr));
  });
}

// Images.

td_status td_image_create(uint32_t channels, uint32_t height, uint32_t width,
                          const uint8_t* planar, td_image** out) {
  return guarded([&] {
    require(out, "null argument");
    auto img = std::make_unique<td_image>();
    img->value = Image(channels, height, width);
    if (planar) std::memcpy(img->value.data.data(), planar, img->value.data.size());
    *out = img.release();
  });
}

td_status td_image_load(const char* path, td_image** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new td_image{io::read_pnm(path)};
  });
}

td_status td_image_save(const td_image* img, const char* path) {
  return guarded([&] {
    require(img && path, "null argument");
    io::write_pnm(path, img->value);
  });
}

void td_image_free(td_image* img) { delete img; }
uint32_t td_image_channels(const td_image* img) { return img ? img->value.channels : 0; }
uint32_t td_image_height(const td_image* img) { return img ? img->value.height : 0; }
uint32_t td_image_width(const td_image* img) { return img ? img->value.width : 0; }
const uint8_t* td_image_data(const td_image* img) {
  return img ? img->value.data.data() : nullptr;
}

td_status td_rectify(const td_image* img, const td_tetragon* t, uint32_t out_w, uint32_t out_h,
                     td_image** out) {
  return guarded([&] {
    require(img && t && out, "null argument");
    *out = new td_image{rectify(img->value, from_c(*t), out_w, out_h)};
  });
}

td_status td_render_heat(const td_output* o, float threshold, uint32_t scale, td_image** out) {
  return guarded([&] {
    require(o && out, "null argument");
    *out = new td_image{render_heat(o->value.heat, o->value.embed, threshold, scale)};
  });
}

}  // extern "C"
