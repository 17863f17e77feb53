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
#ifndef TETRADEC_IO_HPP_
#define TETRADEC_IO_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "tetradec/decoder.hpp"
#include "tetradec/evalkit.hpp"
#include "tetradec/geometry.hpp"
#include "tetradec/gt_encoder.hpp"
#include "tetradec/mask_fit.hpp"
#include "tetradec/tensor.hpp"

namespace tetradec::io {

// Whole-file helpers; failures raise Error(kIoError).
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view bytes);

// Annotation file:
// {"images":[{"id":str,"width":u32,"height":u32,
//   "objects":[{"class":u16,"corners":{"tl":[x,y],"tr":..,"bl":..,"br":..}}]}]}
struct ImageRecord {
  std::string id;
  uint32_t width = 0;
  uint32_t height = 0;
  std::vector<Annotation> objects;

  friend bool operator==(const ImageRecord&, const ImageRecord&) = default;
};

struct Dataset {
  std::vector<ImageRecord> images;

  const ImageRecord* find(const std::string& id) const;
  friend bool operator==(const Dataset&, const Dataset&) = default;
};

// `name` labels error messages. Every object must be a valid tetragon with
// corners inside [0, width) x [0, height).
Dataset parse_annotations(std::string_view text, const std::string& name);
std::string format_annotations(const Dataset& dataset);
Dataset read_annotation_file(const std::string& path);
void write_annotation_file(const std::string& path, const Dataset& dataset);

// Detection file:
// {"images":[{"id":str,"detections":[{"class":u16,"score":f32,
//   "corners":{...},"mean_embedding":f32}]}]}
// Detections are written score-descending per image. On read, corner
// candidates are reconstructed from the tetragon only.
struct ImageDetections {
  std::string id;
  std::vector<Detection> detections;
};

struct DetectionSet {
  std::vector<ImageDetections> images;

  const ImageDetections* find(const std::string& id) const;
};

DetectionSet parse_detections(std::string_view text, const std::string& name);
std::string format_detections(const DetectionSet& set);
DetectionSet read_detection_file(const std::string& path);
void write_detection_file(const std::string& path, const DetectionSet& set);

// Tensor file: one JSON header line
// {"dtype":"f32","shape":[...],"order":"row-major"}, '\n', then the
// little-endian f32 payload.
std::string encode_tensor(const Tensor& t);
Tensor decode_tensor(std::string_view bytes, const std::string& name);
Tensor read_tensor_file(const std::string& path);
void write_tensor_file(const std::string& path, const Tensor& t);

// Binary PGM (P5, 1 channel) or PPM (P6, 3 channels), maxval <= 255.
Image decode_pnm(std::string_view bytes, const std::string& name);
std::string encode_pnm(const Image& image);
Image read_pnm(const std::string& path);
void write_pnm(const std::string& path, const Image& image);

// Masks: a PGM where any nonzero sample is set, or run-length JSON
// {"width":W,"height":H,"counts":[...]} with row-major runs that start with
// unset pixels. Chosen by the ".json" extension.
BinaryMask decode_rle_mask(std::string_view text, const std::string& name);
std::string encode_rle_mask(const BinaryMask& mask);
BinaryMask read_mask(const std::string& path);

// {"corners":{"tl":[x,y],...}} or the bare corners object.
std::string format_tetragon(const Tetragon& t);
Tetragon parse_tetragon(std::string_view text, const std::string& name);

std::string format_fit_result(const FitResult& r);
std::string format_eval_report(const EvalReport& r);
std::string format_eval_csv(const EvalReport& r);
std::string format_usecase_report(const UseCaseReport& r);
// Per-object corner cells and sub-cell offsets of encoded targets.
std::string format_target_objects(const TargetMaps& maps);

}  // namespace tetradec::io

#endif  // TETRADEC_IO_HPP_
