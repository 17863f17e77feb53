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
#include "tetradec/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <sstream>

#include "json.hpp"
#include "tetradec/error.hpp"

namespace tetradec::io {

namespace {

using json = nlohmann::json;

// Input iterator that publishes how many bytes the parser has consumed.
struct CountingIterator {
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  const char* p;
  const char* base;
  size_t* consumed;

  reference operator*() const { return *p; }
  CountingIterator& operator++() {
    ++p;
    *consumed = static_cast<size_t>(p - base);
    return *this;
  }
  CountingIterator operator++(int) {
    CountingIterator old = *this;
    ++*this;
    return old;
  }
  friend bool operator==(const CountingIterator& a, const CountingIterator& b) {
    return a.p == b.p;
  }
};

// DOM builder that also records the byte offset of every value, keyed by its
// JSON pointer, so semantic errors can name a position in the file.
class TrackingSax : public nlohmann::detail::json_sax_dom_parser<json> {
  using Base = nlohmann::detail::json_sax_dom_parser<json>;

 public:
  TrackingSax(json& root, const size_t& consumed) : Base(root, true), consumed_(consumed) {}

  bool null() { return scalar([&] { return Base::null(); }); }
  bool boolean(bool v) { return scalar([&] { return Base::boolean(v); }); }
  bool number_integer(json::number_integer_t v) {
    return scalar([&] { return Base::number_integer(v); });
  }
  bool number_unsigned(json::number_unsigned_t v) {
    return scalar([&] { return Base::number_unsigned(v); });
  }
  bool number_float(json::number_float_t v, const json::string_t& s) {
    return scalar([&] { return Base::number_float(v, s); });
  }
  bool string(json::string_t& v) { return scalar([&] { return Base::string(v); }); }
  bool binary(json::binary_t& v) { return scalar([&] { return Base::binary(v); }); }

  bool start_object(std::size_t len) {
    open(false);
    return Base::start_object(len);
  }
  bool start_array(std::size_t len) {
    open(true);
    return Base::start_array(len);
  }
  bool end_object() { return close([&] { return Base::end_object(); }); }
  bool end_array() { return close([&] { return Base::end_array(); }); }
  bool key(json::string_t& k) {
    frames_.back().key = k;
    key_offset_ = consumed_;
    return Base::key(k);
  }

  template <class Exception>
  bool parse_error(std::size_t pos, const std::string& token, const Exception& ex) {
    return Base::parse_error(pos, token, ex);
  }

  std::map<std::string, size_t> offsets;

 private:
  struct Frame {
    bool array;
    size_t index;
    std::string key;
    std::string path;
  };

  std::string child_path() const {
    if (frames_.empty()) return "";
    const Frame& f = frames_.back();
    return f.path + "/" + (f.array ? std::to_string(f.index) : f.key);
  }

  // Offset of the current token's first byte, approximately.
  size_t here() const { return consumed_ > 0 ? consumed_ - 1 : 0; }

  void advance() {
    if (!frames_.empty() && frames_.back().array) ++frames_.back().index;
  }

  template <typename Fn>
  bool scalar(Fn fn) {
    offsets.emplace(child_path(), here());
    const bool ok = fn();
    advance();
    return ok;
  }

  void open(bool array) {
    std::string path = child_path();
    offsets.emplace(path, here());
    frames_.push_back({array, 0, "", std::move(path)});
  }

  template <typename Fn>
  bool close(Fn fn) {
    frames_.pop_back();
    const bool ok = fn();
    advance();
    return ok;
  }

  const size_t& consumed_;
  size_t key_offset_ = 0;
  std::vector<Frame> frames_;
};

struct Document {
  json root;
  std::map<std::string, size_t> offsets;
  std::string name;

  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    size_t offset = 0;
    // Walk up to the nearest recorded ancestor.
    std::string p = path;
    for (;;) {
      const auto it = offsets.find(p);
      if (it != offsets.end()) {
        offset = it->second;
        break;
      }
      const auto slash = p.rfind('/');
      if (slash == std::string::npos) break;
      p.resize(slash);
    }
    throw MalformedInput(name, offset, what + (path.empty() ? "" : " (at " + path + ")"));
  }

  const json& member(const json& obj, const std::string& path,
                     const std::string& key) const {
    if (!obj.is_object()) fail(path, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) fail(path, "missing field \"" + key + "\"");
    return *it;
  }

  const json& array(const json& v, const std::string& path) const {
    if (!v.is_array()) fail(path, "expected an array");
    return v;
  }

  double number(const json& v, const std::string& path) const {
    if (!v.is_number()) fail(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(path, "number is not finite");
    return d;
  }

  float f32(const json& v, const std::string& path) const {
    return static_cast<float>(number(v, path));
  }

  uint64_t unsigned_int(const json& v, const std::string& path, uint64_t max) const {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<int64_t>() >= 0)) {
      fail(path, "expected a non-negative integer");
    }
    const uint64_t u = v.get<uint64_t>();
    if (u > max) fail(path, "integer out of range");
    return u;
  }

  std::string text(const json& v, const std::string& path) const {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
  }

  Point2 point(const json& v, const std::string& path) const {
    if (!v.is_array() || v.size() != 2) fail(path, "expected [x, y]");
    return {f32(v[0], path + "/0"), f32(v[1], path + "/1")};
  }

  Tetragon corners(const json& v, const std::string& path) const {
    Tetragon t;
    for (CornerType type : kCornerTypes) {
      const std::string key = corner_name(type);
      t.corner(type) = point(member(v, path, key), path + "/" + key);
    }
    return t;
  }
};

Document parse_document(std::string_view text, const std::string& name) {
  Document doc;
  doc.name = name;
  size_t consumed = 0;
  TrackingSax sax(doc.root, consumed);
  const char* begin = text.data();
  try {
    json::sax_parse(CountingIterator{begin, begin, &consumed},
                    CountingIterator{begin + text.size(), begin, &consumed}, &sax);
  } catch (const json::parse_error& e) {
    const size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    std::string msg = e.what();
    throw MalformedInput(name, byte, "JSON syntax error: " + msg);
  }
  doc.offsets = std::move(sax.offsets);
  return doc;
}

json point_json(const Point2& p) {
  return json::array({static_cast<double>(p.x), static_cast<double>(p.y)});
}

json corners_json(const Tetragon& t) {
  json c = json::object();
  for (CornerType type : kCornerTypes) c[corner_name(type)] = point_json(t.corner(type));
  return c;
}

std::string dump(const json& j) { return j.dump(1) + "\n"; }

Detection detection_from_tetragon(uint16_t cls, const Tetragon& t, float score,
                                  float mean_embedding) {
  Detection d;
  d.class_id = cls;
  d.tetragon = t;
  d.score = score;
  d.mean_embedding = mean_embedding;
  for (CornerType type : kCornerTypes) {
    CornerCandidate& c = d.corners[index_of(type)];
    c.corner_type = type;
    c.class_id = cls;
    c.refined = t.corner(type);
    c.embedding = mean_embedding;
  }
  return d;
}

std::string lower_extension(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot == std::string::npos) return "";
  std::string ext = path.substr(dot);
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIoError, "cannot read " + path);
  return ss.str();
}

void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot create " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
}

const ImageRecord* Dataset::find(const std::string& id) const {
  for (const ImageRecord& img : images) {
    if (img.id == id) return &img;
  }
  return nullptr;
}

const ImageDetections* DetectionSet::find(const std::string& id) const {
  for (const ImageDetections& img : images) {
    if (img.id == id) return &img;
  }
  return nullptr;
}

Dataset parse_annotations(std::string_view text, const std::string& name) {
  const Document doc = parse_document(text, name);
  Dataset ds;
  const json& images = doc.array(doc.member(doc.root, "", "images"), "/images");
  for (size_t i = 0; i < images.size(); ++i) {
    const std::string ip = "/images/" + std::to_string(i);
    const json& img = images[i];
    ImageRecord rec;
    rec.id = doc.text(doc.member(img, ip, "id"), ip + "/id");
    rec.width = static_cast<uint32_t>(
        doc.unsigned_int(doc.member(img, ip, "width"), ip + "/width", UINT32_MAX));
    rec.height = static_cast<uint32_t>(
        doc.unsigned_int(doc.member(img, ip, "height"), ip + "/height", UINT32_MAX));
    const json& objects = doc.array(doc.member(img, ip, "objects"), ip + "/objects");
    for (size_t j = 0; j < objects.size(); ++j) {
      const std::string op = ip + "/objects/" + std::to_string(j);
      Annotation ann;
      ann.class_id = static_cast<uint16_t>(
          doc.unsigned_int(doc.member(objects[j], op, "class"), op + "/class", UINT16_MAX));
      ann.tetragon = doc.corners(doc.member(objects[j], op, "corners"), op + "/corners");
      try {
        validate_annotation(ann, UINT16_MAX, rec.width, rec.height);
      } catch (const Error& e) {
        doc.fail(op, e.what());
      }
      rec.objects.push_back(ann);
    }
    ds.images.push_back(std::move(rec));
  }
  return ds;
}

std::string format_annotations(const Dataset& dataset) {
  json images = json::array();
  for (const ImageRecord& img : dataset.images) {
    json objects = json::array();
    for (const Annotation& ann : img.objects) {
      objects.push_back({{"class", ann.class_id}, {"corners", corners_json(ann.tetragon)}});
    }
    images.push_back({{"id", img.id},
                      {"width", img.width},
                      {"height", img.height},
                      {"objects", std::move(objects)}});
  }
  return dump(json{{"images", std::move(images)}});
}

Dataset read_annotation_file(const std::string& path) {
  return parse_annotations(read_file(path), path);
}

void write_annotation_file(const std::string& path, const Dataset& dataset) {
  write_file(path, format_annotations(dataset));
}

DetectionSet parse_detections(std::string_view text, const std::string& name) {
  const Document doc = parse_document(text, name);
  DetectionSet set;
  const json& images = doc.array(doc.member(doc.root, "", "images"), "/images");
  for (size_t i = 0; i < images.size(); ++i) {
    const std::string ip = "/images/" + std::to_string(i);
    ImageDetections rec;
    rec.id = doc.text(doc.member(images[i], ip, "id"), ip + "/id");
    const json& dets =
        doc.array(doc.member(images[i], ip, "detections"), ip + "/detections");
    for (size_t j = 0; j < dets.size(); ++j) {
      const std::string dp = ip + "/detections/" + std::to_string(j);
      const json& d = dets[j];
      const auto cls = static_cast<uint16_t>(
          doc.unsigned_int(doc.member(d, dp, "class"), dp + "/class", UINT16_MAX));
      const float score = doc.f32(doc.member(d, dp, "score"), dp + "/score");
      const Tetragon t = doc.corners(doc.member(d, dp, "corners"), dp + "/corners");
      float mean = 0.0f;
      if (d.contains("mean_embedding")) {
        mean = doc.f32(d["mean_embedding"], dp + "/mean_embedding");
      }
      if (!rec.detections.empty() && score > rec.detections.back().score) {
        doc.fail(dp, "detections must be sorted by descending score");
      }
      rec.detections.push_back(detection_from_tetragon(cls, t, score, mean));
    }
    set.images.push_back(std::move(rec));
  }
  return set;
}

std::string format_detections(const DetectionSet& set) {
  json images = json::array();
  for (const ImageDetections& img : set.images) {
    std::vector<const Detection*> sorted;
    for (const Detection& d : img.detections) sorted.push_back(&d);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Detection* a, const Detection* b) { return a->score > b->score; });
    json dets = json::array();
    for (const Detection* d : sorted) {
      dets.push_back({{"class", d->class_id},
                      {"score", static_cast<double>(d->score)},
                      {"corners", corners_json(d->tetragon)},
                      {"mean_embedding", static_cast<double>(d->mean_embedding)}});
    }
    images.push_back({{"id", img.id}, {"detections", std::move(dets)}});
  }
  return dump(json{{"images", std::move(images)}});
}

DetectionSet read_detection_file(const std::string& path) {
  return parse_detections(read_file(path), path);
}

void write_detection_file(const std::string& path, const DetectionSet& set) {
  write_file(path, format_detections(set));
}

std::string encode_tensor(const Tensor& t) {
  json header = {{"dtype", "f32"}, {"shape", t.shape()}, {"order", "row-major"}};
  std::string out = header.dump();
  out.push_back('\n');
  const size_t start = out.size();
  out.resize(start + 4 * t.size());
  char* dst = out.data() + start;
  for (size_t i = 0; i < t.size(); ++i) {
    uint32_t bits = std::bit_cast<uint32_t>(t[i]);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
    std::memcpy(dst + 4 * i, &bits, 4);
  }
  return out;
}

Tensor decode_tensor(std::string_view bytes, const std::string& name) {
  const size_t newline = bytes.find('\n');
  if (newline == std::string_view::npos) {
    throw MalformedInput(name, bytes.size(), "missing header line terminator");
  }
  const Document doc = parse_document(bytes.substr(0, newline), name);
  const std::string dtype = doc.text(doc.member(doc.root, "", "dtype"), "/dtype");
  if (dtype != "f32") doc.fail("/dtype", "unsupported dtype \"" + dtype + "\"");
  if (doc.root.contains("order")) {
    const std::string order = doc.text(doc.root["order"], "/order");
    if (order != "row-major") doc.fail("/order", "unsupported order \"" + order + "\"");
  }
  const json& shape_json = doc.array(doc.member(doc.root, "", "shape"), "/shape");
  std::vector<size_t> shape;
  size_t count = 1;
  for (size_t i = 0; i < shape_json.size(); ++i) {
    const uint64_t d = doc.unsigned_int(shape_json[i], "/shape/" + std::to_string(i),
                                        uint64_t{1} << 40);
    shape.push_back(static_cast<size_t>(d));
    count *= static_cast<size_t>(d);
  }
  const size_t start = newline + 1;
  const size_t payload = bytes.size() - start;
  if (payload != 4 * count) {
    throw MalformedInput(name, start + std::min(payload, 4 * count),
                         "payload has " + std::to_string(payload) + " bytes, shape needs " +
                             std::to_string(4 * count));
  }
  std::vector<float> data(count);
  for (size_t i = 0; i < count; ++i) {
    uint32_t bits;
    std::memcpy(&bits, bytes.data() + start + 4 * i, 4);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
    data[i] = std::bit_cast<float>(bits);
  }
  return Tensor(std::move(shape), std::move(data));
}

Tensor read_tensor_file(const std::string& path) {
  return decode_tensor(read_file(path), path);
}

void write_tensor_file(const std::string& path, const Tensor& t) {
  write_file(path, encode_tensor(t));
}

Image decode_pnm(std::string_view bytes, const std::string& name) {
  size_t pos = 0;
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_uint = [&](const char* what) -> uint32_t {
    skip_space();
    const size_t start = pos;
    uint64_t v = 0;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
      v = v * 10 + static_cast<uint64_t>(bytes[pos] - '0');
      if (v > UINT32_MAX) throw MalformedInput(name, start, std::string(what) + " too large");
      ++pos;
    }
    if (pos == start) throw MalformedInput(name, start, std::string("expected ") + what);
    return static_cast<uint32_t>(v);
  };
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
    throw MalformedInput(name, 0, "expected a binary PGM (P5) or PPM (P6) header");
  }
  const uint32_t channels = bytes[1] == '5' ? 1 : 3;
  pos = 2;
  const uint32_t width = read_uint("width");
  const uint32_t height = read_uint("height");
  const uint32_t maxval = read_uint("maxval");
  if (maxval == 0 || maxval > 255) {
    throw MalformedInput(name, pos, "only 8-bit samples (maxval 1..255) are supported");
  }
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
    throw MalformedInput(name, pos, "expected whitespace after maxval");
  }
  ++pos;
  const size_t need = size_t{channels} * width * height;
  if (bytes.size() - pos < need) {
    throw MalformedInput(name, bytes.size(),
                         "raster truncated: need " + std::to_string(need) + " bytes");
  }
  Image img(channels, height, width);
  for (uint32_t y = 0; y < height; ++y) {
    for (uint32_t x = 0; x < width; ++x) {
      for (uint32_t c = 0; c < channels; ++c) {
        const auto raw = static_cast<uint8_t>(bytes[pos + (size_t{y} * width + x) * channels + c]);
        img.at(c, y, x) = maxval == 255 ? raw
                                        : static_cast<uint8_t>((raw * 255u + maxval / 2) / maxval);
      }
    }
  }
  return img;
}

std::string encode_pnm(const Image& image) {
  if (image.channels != 1 && image.channels != 3) {
    throw Error(ErrorCode::kInvalidArgument, "PNM output needs 1 or 3 channels");
  }
  std::string out = (image.channels == 1 ? "P5\n" : "P6\n") + std::to_string(image.width) +
                    " " + std::to_string(image.height) + "\n255\n";
  const size_t start = out.size();
  out.resize(start + image.data.size());
  for (uint32_t y = 0; y < image.height; ++y) {
    for (uint32_t x = 0; x < image.width; ++x) {
      for (uint32_t c = 0; c < image.channels; ++c) {
        out[start + (size_t{y} * image.width + x) * image.channels + c] =
            static_cast<char>(image.at(c, y, x));
      }
    }
  }
  return out;
}

Image read_pnm(const std::string& path) { return decode_pnm(read_file(path), path); }

void write_pnm(const std::string& path, const Image& image) {
  write_file(path, encode_pnm(image));
}

BinaryMask decode_rle_mask(std::string_view text, const std::string& name) {
  const Document doc = parse_document(text, name);
  const auto w = static_cast<uint32_t>(
      doc.unsigned_int(doc.member(doc.root, "", "width"), "/width", UINT32_MAX));
  const auto h = static_cast<uint32_t>(
      doc.unsigned_int(doc.member(doc.root, "", "height"), "/height", UINT32_MAX));
  const json& counts = doc.array(doc.member(doc.root, "", "counts"), "/counts");
  BinaryMask mask(w, h);
  size_t at = 0;
  bool on = false;
  for (size_t i = 0; i < counts.size(); ++i) {
    const std::string p = "/counts/" + std::to_string(i);
    const uint64_t run = doc.unsigned_int(counts[i], p, mask.bits.size());
    if (at + run > mask.bits.size()) doc.fail(p, "runs exceed width * height");
    if (on) std::fill_n(mask.bits.begin() + static_cast<std::ptrdiff_t>(at), run, uint8_t{1});
    at += run;
    on = !on;
  }
  if (at != mask.bits.size()) doc.fail("/counts", "runs do not cover width * height");
  return mask;
}

std::string encode_rle_mask(const BinaryMask& mask) {
  json counts = json::array();
  uint8_t current = 0;
  uint64_t run = 0;
  for (uint8_t b : mask.bits) {
    const uint8_t v = b ? 1 : 0;
    if (v != current) {
      counts.push_back(run);
      run = 0;
      current = v;
    }
    ++run;
  }
  counts.push_back(run);
  return dump(json{{"width", mask.width}, {"height", mask.height}, {"counts", std::move(counts)}});
}

BinaryMask read_mask(const std::string& path) {
  if (lower_extension(path) == ".json") return decode_rle_mask(read_file(path), path);
  const Image img = read_pnm(path);
  if (img.channels != 1) throw MalformedInput(path, 1, "mask must be a PGM (P5)");
  BinaryMask mask(img.width, img.height);
  for (size_t i = 0; i < img.data.size(); ++i) mask.bits[i] = img.data[i] ? 1 : 0;
  return mask;
}

std::string format_tetragon(const Tetragon& t) {
  return dump(json{{"corners", corners_json(t)}});
}

Tetragon parse_tetragon(std::string_view text, const std::string& name) {
  const Document doc = parse_document(text, name);
  if (doc.root.is_object() && doc.root.contains("corners")) {
    return doc.corners(doc.root["corners"], "/corners");
  }
  return doc.corners(doc.root, "");
}

std::string format_fit_result(const FitResult& r) {
  return dump(json{{"corners", corners_json(r.tetragon)},
                   {"iou", r.iou},
                   {"iterations", r.iterations},
                   {"initial_iou", r.initial_iou}});
}

namespace {

std::string threshold_key(double t) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.2f", t);
  return buf;
}

}  // namespace

std::string format_eval_report(const EvalReport& r) {
  json ap_at = json::object();
  for (const auto& [thr, ap] : r.ap_at) ap_at[threshold_key(thr)] = ap;
  json per_class = json::object();
  for (const auto& [cls, values] : r.per_class) {
    double mean = 0.0;
    json at = json::object();
    for (size_t i = 0; i < values.size(); ++i) {
      at[threshold_key(r.ap_at[i].first)] = values[i];
      mean += values[i];
    }
    if (!values.empty()) mean /= static_cast<double>(values.size());
    per_class[std::to_string(cls)] = {{"ap", mean}, {"ap_at", std::move(at)}};
  }
  return dump(json{{"ap", r.ap}, {"ap_at", std::move(ap_at)}, {"per_class", std::move(per_class)}});
}

std::string format_eval_csv(const EvalReport& r) {
  std::string out = "iou_threshold,ap\n";
  char line[64];
  for (const auto& [thr, ap] : r.ap_at) {
    std::snprintf(line, sizeof(line), "%.2f,%.17g\n", thr, ap);
    out += line;
  }
  return out;
}

std::string format_usecase_report(const UseCaseReport& r) {
  json j = {{"accuracy", r.accuracy},
            {"num_sides", r.num_sides},
            {"num_positive", r.num_positive},
            {"mean_iou_positives", nullptr}};
  if (r.mean_iou_positives) j["mean_iou_positives"] = *r.mean_iou_positives;
  return dump(j);
}

std::string format_target_objects(const TargetMaps& maps) {
  json objects = json::array();
  for (const ObjectCorners& obj : maps.objects) {
    json cells = json::object(), offsets = json::object();
    for (CornerType type : kCornerTypes) {
      const int t = index_of(type);
      cells[corner_name(type)] = {obj.cells[t].row, obj.cells[t].col};
      offsets[corner_name(type)] = point_json(obj.subpixel[t]);
    }
    objects.push_back({{"class", obj.class_id}, {"cells", cells}, {"offsets", offsets}});
  }
  return dump(json{{"stride", maps.stride}, {"objects", std::move(objects)}});
}

}  // namespace tetradec::io
