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
/*
 * TetraDec C API.
 *
 * Every fallible call returns a td_status. On failure a message describing
 * the error is available from td_last_error() on the calling thread until the
 * next failing call on that thread. Handles are opaque and owned by the
 * caller; release them with the matching *_free function. Strings returned
 * through char** out-parameters are heap allocated and released with
 * td_string_free(). All functions are reentrant; a handle may be read from
 * several threads at once but must not be mutated concurrently.
 */
#ifndef TETRADEC_TETRADEC_H_
#define TETRADEC_TETRADEC_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(TETRADEC_BUILDING_LIBRARY)
#define TETRADEC_API __declspec(dllexport)
#else
#define TETRADEC_API __declspec(dllimport)
#endif
#else
#define TETRADEC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum td_status {
  TD_OK = 0,
  TD_ERR_INVALID_ARGUMENT = 1,
  TD_ERR_SHAPE = 2,
  TD_ERR_SHAPE_MISMATCH = 3,
  TD_ERR_DEGENERATE_GEOMETRY = 4,
  TD_ERR_INVALID_ANNOTATION = 5,
  TD_ERR_EMPTY_MASK = 6,
  TD_ERR_DEGENERATE_MASK = 7,
  TD_ERR_BAD_GT_CARDINALITY = 8,
  TD_ERR_CONFIG_INFEASIBLE = 9,
  TD_ERR_MALFORMED_INPUT = 10,
  TD_ERR_IO = 11,
  TD_ERR_INTERNAL = 12
} td_status;

TETRADEC_API const char* td_last_error(void);
TETRADEC_API const char* td_status_name(td_status status);
TETRADEC_API const char* td_version(void);
TETRADEC_API void td_string_free(char* s);

/* ---- geometry ---------------------------------------------------------- */

typedef struct td_point {
  float x;
  float y;
} td_point;

/* Image coordinates, origin top-left, y down. */
typedef struct td_tetragon {
  td_point tl;
  td_point tr;
  td_point bl;
  td_point br;
} td_tetragon;

typedef enum td_corner_type {
  TD_CORNER_TL = 0,
  TD_CORNER_TR = 1,
  TD_CORNER_BL = 2,
  TD_CORNER_BR = 3
} td_corner_type;

/* 1 if the corners are ordered, the boundary is simple and the area positive. */
TETRADEC_API int td_tetragon_is_valid(const td_tetragon* t);
TETRADEC_API td_status td_tetragon_area(const td_tetragon* t, double* out);
TETRADEC_API td_status td_tetragon_iou(const td_tetragon* a, const td_tetragon* b,
                                       double* out);
/* Row-major 3x3 map tl->(0,0), tr->(w,0), bl->(0,h), br->(w,h). */
TETRADEC_API td_status td_homography_from_tetragon(const td_tetragon* t, uint32_t out_w,
                                                   uint32_t out_h, double out[9]);
/* Reads {"corners":{"tl":[x,y],...}} from a JSON file. */
TETRADEC_API td_status td_tetragon_load(const char* path, td_tetragon* out);
TETRADEC_API td_status td_tetragon_json(const td_tetragon* t, char** out);

/* ---- tensors ----------------------------------------------------------- */

typedef struct td_tensor td_tensor;

/* Zero-filled row-major f32 tensor. */
TETRADEC_API td_status td_tensor_create(const size_t* shape, size_t ndim, td_tensor** out);
TETRADEC_API void td_tensor_free(td_tensor* t);
TETRADEC_API size_t td_tensor_ndim(const td_tensor* t);
TETRADEC_API size_t td_tensor_dim(const td_tensor* t, size_t axis);
TETRADEC_API size_t td_tensor_size(const td_tensor* t);
TETRADEC_API float* td_tensor_data(td_tensor* t);
TETRADEC_API const float* td_tensor_cdata(const td_tensor* t);
TETRADEC_API td_status td_tensor_load(const char* path, td_tensor** out);
TETRADEC_API td_status td_tensor_save(const td_tensor* t, const char* path);

/* C x H x W in, C x H x W out. */
TETRADEC_API td_status td_corner_pool(const td_tensor* features, td_corner_type type,
                                      td_tensor** out);
/* H x W peak suppression with an odd square window. */
TETRADEC_API td_status td_nms(const td_tensor* heat, int window, td_tensor** out);

/* ---- annotations ------------------------------------------------------- */

typedef struct td_object {
  uint16_t class_id;
  td_tetragon tetragon;
} td_object;

typedef struct td_dataset td_dataset;

TETRADEC_API td_status td_dataset_create(td_dataset** out);
TETRADEC_API td_status td_dataset_load(const char* path, td_dataset** out);
TETRADEC_API td_status td_dataset_save(const td_dataset* ds, const char* path);
TETRADEC_API void td_dataset_free(td_dataset* ds);
TETRADEC_API size_t td_dataset_num_images(const td_dataset* ds);
/* NULL when out of range. Valid until the dataset is modified or freed. */
TETRADEC_API const char* td_dataset_image_id(const td_dataset* ds, size_t image);
TETRADEC_API td_status td_dataset_image_size(const td_dataset* ds, size_t image,
                                             uint32_t* width, uint32_t* height);
TETRADEC_API size_t td_dataset_num_objects(const td_dataset* ds, size_t image);
TETRADEC_API td_status td_dataset_object(const td_dataset* ds, size_t image, size_t index,
                                         td_object* out);
TETRADEC_API td_status td_dataset_add_image(td_dataset* ds, const char* id, uint32_t width,
                                            uint32_t height, const td_object* objects,
                                            size_t count);

/* ---- synthetic data ---------------------------------------------------- */

typedef struct td_scene_config {
  uint32_t img_w;
  uint32_t img_h;
  uint32_t min_objects;
  uint32_t max_objects;
  float warp_strength;
  float min_area;
  float max_side_fraction;
  float min_gap;
  uint16_t num_classes;
  uint64_t seed;
} td_scene_config;

typedef struct td_noise_config {
  float heat_sigma;
  float embed_sigma;
  float offset_sigma;
  uint32_t n_distractor_peaks;
  uint64_t seed;
} td_noise_config;

TETRADEC_API void td_scene_config_default(td_scene_config* cfg);
TETRADEC_API void td_noise_config_default(td_noise_config* cfg);

/* Deterministic, well-mixed seed for an independent random stream. */
TETRADEC_API uint64_t td_derive_seed(uint64_t base, uint64_t stream);

/* Images "img_000000", ... each generated from its own derived seed. */
TETRADEC_API td_status td_synth_dataset(const td_scene_config* cfg, uint32_t num_images,
                                        td_dataset** out);

/* ---- network output ---------------------------------------------------- */

/* heat 4 x C x Hf x Wf, embed 4 x Hf x Wf, offset 4 x 2 x Hf x Wf. */
typedef struct td_output td_output;

/* Copies the three tensors. */
TETRADEC_API td_status td_output_create(const td_tensor* heat, const td_tensor* embed,
                                        const td_tensor* offset, uint32_t stride,
                                        td_output** out);
/* Reads <prefix>.heat.tensor, <prefix>.embed.tensor, <prefix>.offset.tensor. */
TETRADEC_API td_status td_output_load(const char* prefix, uint32_t stride, td_output** out);
TETRADEC_API td_status td_output_save(const td_output* o, const char* prefix);
TETRADEC_API void td_output_free(td_output* o);
TETRADEC_API const td_tensor* td_output_heat(const td_output* o);
TETRADEC_API const td_tensor* td_output_embed(const td_output* o);
TETRADEC_API const td_tensor* td_output_offset(const td_output* o);

TETRADEC_API td_status td_simulate_output(const td_dataset* ds, size_t image,
                                          const td_noise_config* noise, uint16_t num_classes,
                                          uint32_t stride, td_output** out);

/* ---- ground-truth encoding --------------------------------------------- */

typedef struct td_targets td_targets;

TETRADEC_API td_status td_encode(const td_dataset* ds, size_t image, uint16_t num_classes,
                                 uint32_t stride, td_targets** out);
TETRADEC_API void td_targets_free(td_targets* t);
TETRADEC_API const td_tensor* td_targets_heat(const td_targets* t);
TETRADEC_API const td_tensor* td_targets_offset(const td_targets* t);
/* Ideal embedding: object k holds 1.5 * k at its corner cells, 0 elsewhere. */
TETRADEC_API const td_tensor* td_targets_embed(const td_targets* t);
TETRADEC_API size_t td_targets_num_objects(const td_targets* t);
TETRADEC_API td_status td_targets_objects_json(const td_targets* t, char** out);
/* Writes <prefix>.heat.tensor, <prefix>.offset.tensor, <prefix>.embed.tensor and
 * <prefix>.objects.json. The three tensors decode like a network output. */
TETRADEC_API td_status td_targets_save(const td_targets* t, const char* prefix);

/* ---- losses ------------------------------------------------------------ */

typedef struct td_loss_weights {
  float w_off;
  float w_pull;
  float w_push;
  float alpha;
  float beta;
} td_loss_weights;

typedef struct td_loss_breakdown {
  double total;
  double det;
  double off;
  double pull;
  double push;
} td_loss_breakdown;

typedef enum td_loss_component {
  TD_LOSS_DETECTION = 0,
  TD_LOSS_OFFSET = 1,
  TD_LOSS_PULL = 2,
  TD_LOSS_PUSH = 3,
  TD_LOSS_TOTAL = 4
} td_loss_component;

TETRADEC_API void td_loss_weights_default(td_loss_weights* w);
TETRADEC_API td_status td_total_loss(const td_output* pred, const td_targets* gt,
                                     const td_loss_weights* w, td_loss_breakdown* out);
/* Max relative error of analytic vs central-difference gradients on a random
 * small problem drawn from `seed`. */
TETRADEC_API td_status td_gradient_check(td_loss_component component, uint64_t seed,
                                         double h, double* max_rel_error);

/* ---- decoding ---------------------------------------------------------- */

typedef enum td_score_sign { TD_SCORE_SUBTRACT_PULL = 0, TD_SCORE_ADD_PULL = 1 } td_score_sign;
typedef enum td_grouping { TD_GROUPING_EXHAUSTIVE = 0, TD_GROUPING_GREEDY_ANCHOR = 1 } td_grouping;

typedef struct td_decode_config {
  uint32_t k;
  float heat_floor;
  float embed_tol;
  float det_nms_iou;
  td_score_sign score_sign;
  int nms_window;
  td_grouping grouping;
} td_decode_config;

typedef struct td_detection {
  uint16_t class_id;
  float score;
  float mean_embedding;
  td_tetragon tetragon;
} td_detection;

TETRADEC_API void td_decode_config_default(td_decode_config* cfg);

/* Score-descending array; release with td_detection_array_free. */
TETRADEC_API td_status td_decode(const td_output* o, const td_decode_config* cfg,
                                 td_detection** dets, size_t* count);
TETRADEC_API void td_detection_array_free(td_detection* dets);

/* Detection file contents: per image id, a list of detections. */
typedef struct td_detections td_detections;

TETRADEC_API td_status td_detections_create(td_detections** out);
TETRADEC_API td_status td_detections_load(const char* path, td_detections** out);
TETRADEC_API td_status td_detections_save(const td_detections* d, const char* path);
TETRADEC_API void td_detections_free(td_detections* d);
TETRADEC_API td_status td_detections_add_image(td_detections* d, const char* id,
                                               const td_detection* dets, size_t count);
TETRADEC_API size_t td_detections_num_images(const td_detections* d);
TETRADEC_API const char* td_detections_image_id(const td_detections* d, size_t image);
TETRADEC_API size_t td_detections_count(const td_detections* d, size_t image);
TETRADEC_API td_status td_detections_get(const td_detections* d, size_t image, size_t index,
                                         td_detection* out);

/* ---- evaluation -------------------------------------------------------- */

/* AP over IoU thresholds 0.50:0.05:0.95. Detections are matched to ground
 * truth by image id; ground-truth images without an entry count as having no
 * detections. `csv` may be NULL. */
TETRADEC_API td_status td_evaluate(const td_detections* dets, const td_dataset* gt,
                                   unsigned jobs, char** report_json, char** csv);
TETRADEC_API td_status td_evaluate_usecase(const td_detections* dets, const td_dataset* gt,
                                           char** report_json);

/* ---- mask fitting ------------------------------------------------------ */

typedef struct td_mask td_mask;

typedef struct td_fit_result {
  td_tetragon tetragon;
  double iou;
  double initial_iou;
  uint32_t iterations;
} td_fit_result;

/* PGM (nonzero = set) or run-length JSON when the path ends in ".json". */
TETRADEC_API td_status td_mask_load(const char* path, td_mask** out);
/* Row-major, one byte per pixel. */
TETRADEC_API td_status td_mask_create(uint32_t width, uint32_t height, const uint8_t* bits,
                                      td_mask** out);
TETRADEC_API void td_mask_free(td_mask* m);
TETRADEC_API td_status td_fit_tetragon(const td_mask* m, uint32_t max_rounds,
                                       td_fit_result* out);
TETRADEC_API td_status td_fit_result_json(const td_fit_result* r, char** out);

/* ---- images ------------------------------------------------------------ */

/* Planar 8-bit raster, C x H x W. */
typedef struct td_image td_image;

TETRADEC_API td_status td_image_create(uint32_t channels, uint32_t height, uint32_t width,
                                       const uint8_t* planar, td_image** out);
/* Binary PGM (P5) or PPM (P6). */
TETRADEC_API td_status td_image_load(const char* path, td_image** out);
TETRADEC_API td_status td_image_save(const td_image* img, const char* path);
TETRADEC_API void td_image_free(td_image* img);
TETRADEC_API uint32_t td_image_channels(const td_image* img);
TETRADEC_API uint32_t td_image_height(const td_image* img);
TETRADEC_API uint32_t td_image_width(const td_image* img);
TETRADEC_API const uint8_t* td_image_data(const td_image* img);

TETRADEC_API td_status td_rectify(const td_image* img, const td_tetragon* t, uint32_t out_w,
                                  uint32_t out_h, td_image** out);

/* Heat/embedding overlay: black where heat < threshold, rainbow-mapped
 * normalized embedding elsewhere; four panels tl, tr, bl, br. */
TETRADEC_API td_status td_render_heat(const td_output* o, float threshold, uint32_t scale,
                                      td_image** out);

#ifdef __cplusplus
}
#endif

#endif /* TETRADEC_TETRADEC_H_ */
