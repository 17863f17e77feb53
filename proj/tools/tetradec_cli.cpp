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
// Command-line front end for the tetradec library. Every subcommand goes
// through the public C API so the CLI exercises exactly what clients see.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tetradec/tetradec.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitMalformed = 2;

// Thrown to unwind a subcommand with a library status.
struct StatusError {
  td_status status;
  std::string message;
};

void check(td_status status) {
  if (status != TD_OK) throw StatusError{status, td_last_error()};
}

void fail_io(const std::string& message) { throw StatusError{TD_ERR_IO, message}; }

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using DatasetPtr = std::unique_ptr<td_dataset, Deleter<td_dataset, td_dataset_free>>;
using OutputPtr = std::unique_ptr<td_output, Deleter<td_output, td_output_free>>;
using TargetsPtr = std::unique_ptr<td_targets, Deleter<td_targets, td_targets_free>>;
using DetectionsPtr =
    std::unique_ptr<td_detections, Deleter<td_detections, td_detections_free>>;
using MaskPtr = std::unique_ptr<td_mask, Deleter<td_mask, td_mask_free>>;
using ImagePtr = std::unique_ptr<td_image, Deleter<td_image, td_image_free>>;

// Takes ownership of a library-allocated string.
std::string take(char* s) {
  std::string out = s ? s : "";
  td_string_free(s);
  return out;
}

void make_dirs(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail_io(dir.string() + ": " + ec.message());
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) fail_io(path + ": cannot write");
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Callers store results by
// index so the merged output never depends on scheduling.
template <typename Fn>
void parallel_for(size_t n, unsigned jobs, Fn fn) {
  const size_t workers = std::min<size_t>(std::max(1u, jobs), n);
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

// ---- synth ---------------------------------------------------------------

struct SynthOptions {
  std::string out;
  uint32_t num_images = 10;
  uint32_t stride = 4;
  td_scene_config scene{};
  td_noise_config noise{};
};

void run_synth(const SynthOptions& o) {
  DatasetPtr ds;
  {
    td_dataset* raw = nullptr;
    check(td_synth_dataset(&o.scene, o.num_images, &raw));
    ds.reset(raw);
  }
  const fs::path root(o.out);
  make_dirs(root / "outputs");
  check(td_dataset_save(ds.get(), (root / "annotations.json").string().c_str()));
  const uint64_t noise_base = td_derive_seed(o.scene.seed, 1);
  for (size_t i = 0; i < td_dataset_num_images(ds.get()); ++i) {
    td_noise_config noise = o.noise;
    noise.seed = td_derive_seed(noise_base, i);
    td_output* raw = nullptr;
    check(td_simulate_output(ds.get(), i, &noise, o.scene.num_classes, o.stride, &raw));
    OutputPtr output(raw);
    const fs::path prefix = root / "outputs" / td_dataset_image_id(ds.get(), i);
    check(td_output_save(output.get(), prefix.string().c_str()));
  }
}

// ---- encode --------------------------------------------------------------

struct EncodeOptions {
  std::string annotations;
  std::string out;
  uint16_t num_classes = 1;
  uint32_t stride = 4;
};

void run_encode(const EncodeOptions& o) {
  td_dataset* raw = nullptr;
  check(td_dataset_load(o.annotations.c_str(), &raw));
  DatasetPtr ds(raw);
  make_dirs(o.out);
  for (size_t i = 0; i < td_dataset_num_images(ds.get()); ++i) {
    td_targets* t = nullptr;
    check(td_encode(ds.get(), i, o.num_classes, o.stride, &t));
    TargetsPtr targets(t);
    const fs::path prefix = fs::path(o.out) / td_dataset_image_id(ds.get(), i);
    check(td_targets_save(targets.get(), prefix.string().c_str()));
  }
}

// ---- decode --------------------------------------------------------------

struct DecodeOptions {
  std::vector<std::string> inputs;
  std::string dir;
  std::string out;
  uint32_t stride = 4;
  unsigned jobs = 1;
  std::string score_sign = "subtract";
  std::string grouping = "exhaustive";
  td_decode_config config{};
};

std::vector<std::string> scan_prefixes(const std::string& dir) {
  static const std::string kSuffix = ".heat.tensor";
  std::vector<std::string> prefixes;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name.size() > kSuffix.size() &&
        name.compare(name.size() - kSuffix.size(), kSuffix.size(), kSuffix) == 0) {
      prefixes.push_back((fs::path(dir) / name.substr(0, name.size() - kSuffix.size())).string());
    }
  }
  if (ec) fail_io(dir + ": " + ec.message());
  std::sort(prefixes.begin(), prefixes.end());
  return prefixes;
}

void run_decode(DecodeOptions o) {
  std::vector<std::string> prefixes = o.inputs;
  if (!o.dir.empty()) {
    const std::vector<std::string> scanned = scan_prefixes(o.dir);
    prefixes.insert(prefixes.end(), scanned.begin(), scanned.end());
  }
  o.config.score_sign = o.score_sign == "add" ? TD_SCORE_ADD_PULL : TD_SCORE_SUBTRACT_PULL;
  o.config.grouping =
      o.grouping == "greedy" ? TD_GROUPING_GREEDY_ANCHOR : TD_GROUPING_EXHAUSTIVE;

  struct Slot {
    td_status status = TD_OK;
    std::string error;
    std::vector<td_detection> detections;
  };
  std::vector<Slot> slots(prefixes.size());
  parallel_for(prefixes.size(), o.jobs, [&](size_t i) {
    Slot& slot = slots[i];
    td_output* raw = nullptr;
    slot.status = td_output_load(prefixes[i].c_str(), o.stride, &raw);
    if (slot.status != TD_OK) {
      slot.error = td_last_error();
      return;
    }
    OutputPtr output(raw);
    td_detection* dets = nullptr;
    size_t count = 0;
    slot.status = td_decode(output.get(), &o.config, &dets, &count);
    if (slot.status != TD_OK) {
      slot.error = td_last_error();
      return;
    }
    slot.detections.assign(dets, dets + count);
    td_detection_array_free(dets);
  });

  td_detections* raw = nullptr;
  check(td_detections_create(&raw));
  DetectionsPtr set(raw);
  for (size_t i = 0; i < prefixes.size(); ++i) {
    if (slots[i].status != TD_OK) throw StatusError{slots[i].status, slots[i].error};
    const std::string id = fs::path(prefixes[i]).filename().string();
    check(td_detections_add_image(set.get(), id.c_str(), slots[i].detections.data(),
                                  slots[i].detections.size()));
  }
  check(td_detections_save(set.get(), o.out.c_str()));
}

// ---- eval ----------------------------------------------------------------

struct EvalOptions {
  std::string detections;
  std::string annotations;
  std::string csv;
  std::string out;
  unsigned jobs = 1;
};

std::pair<DetectionsPtr, DatasetPtr> load_eval_inputs(const EvalOptions& o) {
  td_detections* dets = nullptr;
  check(td_detections_load(o.detections.c_str(), &dets));
  DetectionsPtr d(dets);
  td_dataset* gt = nullptr;
  check(td_dataset_load(o.annotations.c_str(), &gt));
  return {std::move(d), DatasetPtr(gt)};
}

void run_eval(const EvalOptions& o) {
  auto [dets, gt] = load_eval_inputs(o);
  char* json = nullptr;
  char* csv = nullptr;
  check(td_evaluate(dets.get(), gt.get(), o.jobs, &json, o.csv.empty() ? nullptr : &csv));
  const std::string report = take(json);
  if (!o.csv.empty()) write_text(o.csv, take(csv));
  write_text(o.out, report);
}

void run_eval_usecase(const EvalOptions& o) {
  auto [dets, gt] = load_eval_inputs(o);
  char* json = nullptr;
  check(td_evaluate_usecase(dets.get(), gt.get(), &json));
  write_text(o.out, take(json));
}

// ---- fit-mask ------------------------------------------------------------

struct FitOptions {
  std::string mask;
  std::string out;
  uint32_t rounds = 6;
};

void run_fit_mask(const FitOptions& o) {
  td_mask* raw = nullptr;
  check(td_mask_load(o.mask.c_str(), &raw));
  MaskPtr mask(raw);
  td_fit_result result{};
  check(td_fit_tetragon(mask.get(), o.rounds, &result));
  char* json = nullptr;
  check(td_fit_result_json(&result, &json));
  write_text(o.out, take(json));
}

// ---- rectify -------------------------------------------------------------

struct RectifyOptions {
  std::string image;
  std::string tetragon;
  std::string out;
  uint32_t width = 0;
  uint32_t height = 0;
};

void run_rectify(const RectifyOptions& o) {
  td_image* raw = nullptr;
  check(td_image_load(o.image.c_str(), &raw));
  ImagePtr image(raw);
  td_tetragon t{};
  check(td_tetragon_load(o.tetragon.c_str(), &t));
  td_image* rectified = nullptr;
  check(td_rectify(image.get(), &t, o.width, o.height, &rectified));
  ImagePtr result(rectified);
  check(td_image_save(result.get(), o.out.c_str()));
}

// ---- loss-check ----------------------------------------------------------

struct LossCheckOptions {
  uint64_t seed = 0;
  uint32_t seeds = 10;
  double tolerance = 1e-4;
  double step = 1e-3;
};

int run_loss_check(const LossCheckOptions& o) {
  static const char* kNames[] = {"detection", "offset", "pull", "push", "total"};
  bool ok = true;
  for (int c = TD_LOSS_DETECTION; c <= TD_LOSS_TOTAL; ++c) {
    double worst = 0.0;
    for (uint32_t i = 0; i < o.seeds; ++i) {
      double err = 0.0;
      check(td_gradient_check(static_cast<td_loss_component>(c), o.seed + i, o.step, &err));
      worst = std::max(worst, err);
    }
    const bool pass = worst <= o.tolerance;
    ok = ok && pass;
    std::printf("%-9s max_rel_error=%.3e %s\n", kNames[c], worst, pass ? "ok" : "FAILED");
  }
  return ok ? 0 : kExitFailure;
}

// ---- render-heat ---------------------------------------------------------

struct RenderOptions {
  std::string input;
  std::string out;
  uint32_t stride = 4;
  uint32_t scale = 4;
  float threshold = 0.1f;
};

void run_render_heat(const RenderOptions& o) {
  td_output* raw = nullptr;
  check(td_output_load(o.input.c_str(), o.stride, &raw));
  OutputPtr output(raw);
  td_image* img = nullptr;
  check(td_render_heat(output.get(), o.threshold, o.scale, &img));
  ImagePtr image(img);
  check(td_image_save(image.get(), o.out.c_str()));
}

// ---- --config ------------------------------------------------------------

// Expands `--config FILE` into ordinary flags placed ahead of the user's own
// arguments. Options take their last value, so explicit flags win.
std::vector<std::string> expand_config(const std::vector<std::string>& args,
                                       const std::vector<std::string>& subcommands) {
  auto sub = std::find_if(args.begin() + 1, args.end(), [&](const std::string& a) {
    return std::find(subcommands.begin(), subcommands.end(), a) != subcommands.end();
  });
  if (sub == args.end()) return args;

  std::vector<std::string> rest;
  std::vector<std::string> injected;
  for (auto it = sub + 1; it != args.end(); ++it) {
    std::string path;
    if (*it == "--config" && it + 1 != args.end()) {
      path = *++it;
    } else if (it->rfind("--config=", 0) == 0) {
      path = it->substr(9);
    } else {
      rest.push_back(*it);
      continue;
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StatusError{TD_ERR_IO, path + ": cannot open"};
    std::stringstream buffer;
    buffer << in.rdbuf();
    nlohmann::json cfg;
    try {
      cfg = nlohmann::json::parse(buffer.str());
    } catch (const nlohmann::json::parse_error& e) {
      throw StatusError{TD_ERR_MALFORMED_INPUT,
                        path + ": byte " + std::to_string(e.byte > 0 ? e.byte - 1 : 0) +
                            ": invalid JSON"};
    }
    if (!cfg.is_object()) {
      throw StatusError{TD_ERR_MALFORMED_INPUT, path + ": byte 0: expected a JSON object"};
    }
    for (const auto& [key, value] : cfg.items()) {
      std::string flag = "--" + key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      if (value.is_boolean()) {
        if (value.get<bool>()) injected.push_back(flag);
      } else if (value.is_array()) {
        for (const auto& v : value) {
          injected.push_back(flag);
          injected.push_back(v.is_string() ? v.get<std::string>() : v.dump());
        }
      } else {
        injected.push_back(flag);
        injected.push_back(value.is_string() ? value.get<std::string>() : value.dump());
      }
    }
  }
  std::vector<std::string> out(args.begin(), sub + 1);
  out.insert(out.end(), injected.begin(), injected.end());
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

int report(const StatusError& e) {
  std::cerr << "tetradec: " << td_status_name(e.status) << ": " << e.message << "\n";
  return e.status == TD_ERR_MALFORMED_INPUT ? kExitMalformed : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Four-corner object detection toolkit", "tetradec"};
  app.set_version_flag("--version", std::string(td_version()));
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  auto add_config = [](CLI::App* sub) {
    sub->add_option("--config", "JSON file of option defaults; explicit flags win");
  };

  int exit_code = 0;

  SynthOptions synth;
  td_scene_config_default(&synth.scene);
  td_noise_config_default(&synth.noise);
  CLI::App* synth_cmd = app.add_subcommand("synth", "Generate scenes and simulated outputs");
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();
  synth_cmd->add_option("--num-images", synth.num_images)->capture_default_str();
  synth_cmd->add_option("--seed", synth.scene.seed)->envname("TETRADEC_SEED")
      ->capture_default_str();
  synth_cmd->add_option("--img-w", synth.scene.img_w)->capture_default_str();
  synth_cmd->add_option("--img-h", synth.scene.img_h)->capture_default_str();
  synth_cmd->add_option("--min-objects", synth.scene.min_objects)->capture_default_str();
  synth_cmd->add_option("--max-objects", synth.scene.max_objects)->capture_default_str();
  synth_cmd->add_option("--warp", synth.scene.warp_strength)->capture_default_str();
  synth_cmd->add_option("--min-area", synth.scene.min_area)->capture_default_str();
  synth_cmd->add_option("--max-side-fraction", synth.scene.max_side_fraction)
      ->capture_default_str();
  synth_cmd->add_option("--min-gap", synth.scene.min_gap)->capture_default_str();
  synth_cmd->add_option("--num-classes", synth.scene.num_classes)->capture_default_str();
  synth_cmd->add_option("--stride", synth.stride)->capture_default_str();
  synth_cmd->add_option("--heat-sigma", synth.noise.heat_sigma)->capture_default_str();
  synth_cmd->add_option("--embed-sigma", synth.noise.embed_sigma)->capture_default_str();
  synth_cmd->add_option("--offset-sigma", synth.noise.offset_sigma)->capture_default_str();
  synth_cmd->add_option("--distractors", synth.noise.n_distractor_peaks)
      ->capture_default_str();
  add_config(synth_cmd);
  synth_cmd->callback([&] { run_synth(synth); });

  EncodeOptions encode;
  CLI::App* encode_cmd = app.add_subcommand("encode", "Encode annotations as target maps");
  encode_cmd->add_option("--annotations", encode.annotations)->required()
      ->check(CLI::ExistingFile);
  encode_cmd->add_option("--out", encode.out, "Output directory")->required();
  encode_cmd->add_option("--num-classes", encode.num_classes)->capture_default_str();
  encode_cmd->add_option("--stride", encode.stride)->capture_default_str();
  add_config(encode_cmd);
  encode_cmd->callback([&] { run_encode(encode); });

  DecodeOptions decode;
  td_decode_config_default(&decode.config);
  CLI::App* decode_cmd = app.add_subcommand("decode", "Decode network outputs");
  decode_cmd->add_option("--input", decode.inputs, "Tensor prefix <p>.{heat,embed,offset}.tensor")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  decode_cmd->add_option("--dir", decode.dir, "Decode every *.heat.tensor in a directory")
      ->check(CLI::ExistingDirectory);
  decode_cmd->add_option("--out", decode.out, "Detection file")->required();
  decode_cmd->add_option("--stride", decode.stride)->capture_default_str();
  decode_cmd->add_option("--jobs", decode.jobs)->capture_default_str();
  decode_cmd->add_option("--k", decode.config.k)->capture_default_str();
  decode_cmd->add_option("--heat-floor", decode.config.heat_floor)->capture_default_str();
  decode_cmd->add_option("--embed-tol", decode.config.embed_tol)->capture_default_str();
  decode_cmd->add_option("--nms-iou", decode.config.det_nms_iou)->capture_default_str();
  decode_cmd->add_option("--nms-window", decode.config.nms_window)->capture_default_str();
  decode_cmd->add_option("--score-sign", decode.score_sign)
      ->check(CLI::IsMember({"subtract", "add"}))->capture_default_str();
  decode_cmd->add_option("--grouping", decode.grouping)
      ->check(CLI::IsMember({"exhaustive", "greedy"}))->capture_default_str();
  add_config(decode_cmd);
  decode_cmd->callback([&] {
    if (decode.inputs.empty() && decode.dir.empty()) {
      throw CLI::RequiredError("--input or --dir");
    }
    run_decode(decode);
  });

  EvalOptions eval;
  auto add_eval_options = [&](CLI::App* cmd) {
    cmd->add_option("--detections", eval.detections)->required();
    cmd->add_option("--annotations", eval.annotations)->required();
    cmd->add_option("--out", eval.out, "Report file (default stdout)");
    add_config(cmd);
  };
  CLI::App* eval_cmd = app.add_subcommand("eval", "COCO-style AP over IoU 0.50:0.95");
  add_eval_options(eval_cmd);
  eval_cmd->add_option("--csv", eval.csv, "Also write a per-threshold CSV table");
  eval_cmd->add_option("--jobs", eval.jobs)->capture_default_str();
  eval_cmd->callback([&] { run_eval(eval); });
  CLI::App* usecase_cmd =
      app.add_subcommand("eval-usecase", "Two-sided side-accuracy metric at IoU 0.8");
  add_eval_options(usecase_cmd);
  usecase_cmd->callback([&] { run_eval_usecase(eval); });

  FitOptions fit;
  CLI::App* fit_cmd = app.add_subcommand("fit-mask", "Fit a tetragon to a binary mask");
  fit_cmd->add_option("mask", fit.mask, "PGM file or run-length JSON")->required();
  fit_cmd->add_option("--rounds", fit.rounds)->capture_default_str();
  fit_cmd->add_option("--out", fit.out, "Result file (default stdout)");
  add_config(fit_cmd);
  fit_cmd->callback([&] { run_fit_mask(fit); });

  RectifyOptions rect;
  CLI::App* rect_cmd = app.add_subcommand("rectify", "Warp a tetragon region to a rectangle");
  rect_cmd->add_option("--image", rect.image, "Input PPM/PGM")->required();
  rect_cmd->add_option("--tetragon", rect.tetragon, "Tetragon JSON")->required();
  rect_cmd->add_option("--width", rect.width)->required();
  rect_cmd->add_option("--height", rect.height)->required();
  rect_cmd->add_option("--out", rect.out)->required();
  add_config(rect_cmd);
  rect_cmd->callback([&] { run_rectify(rect); });

  LossCheckOptions loss;
  CLI::App* loss_cmd = app.add_subcommand("loss-check", "Finite-difference gradient checks");
  loss_cmd->add_option("--seed", loss.seed, "First seed")->envname("TETRADEC_SEED")
      ->capture_default_str();
  loss_cmd->add_option("--seeds", loss.seeds, "Number of seeds")->capture_default_str();
  loss_cmd->add_option("--tolerance", loss.tolerance)->capture_default_str();
  loss_cmd->add_option("--step", loss.step)->capture_default_str();
  add_config(loss_cmd);
  loss_cmd->callback([&] { exit_code = run_loss_check(loss); });

  RenderOptions render;
  CLI::App* render_cmd = app.add_subcommand("render-heat", "Visualize heat and embeddings");
  render_cmd->add_option("--input", render.input, "Tensor prefix")->required();
  render_cmd->add_option("--out", render.out, "Output PPM")->required();
  render_cmd->add_option("--stride", render.stride)->capture_default_str();
  render_cmd->add_option("--scale", render.scale)->capture_default_str();
  render_cmd->add_option("--threshold", render.threshold)->capture_default_str();
  add_config(render_cmd);
  render_cmd->callback([&] { run_render_heat(render); });

  std::vector<std::string> subcommands;
  for (const CLI::App* sub : app.get_subcommands({})) subcommands.push_back(sub->get_name());

  try {
    std::vector<std::string> args = expand_config({argv, argv + argc}, subcommands);
    std::reverse(args.begin(), args.end());
    args.pop_back();  // program name
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    // Usage errors share the generic failure code; 2 is kept for bad files.
    return app.exit(e) == 0 ? 0 : kExitFailure;
  } catch (const StatusError& e) {
    return report(e);
  } catch (const std::exception& e) {
    std::cerr << "tetradec: " << e.what() << "\n";
    return kExitFailure;
  }
  return exit_code;
}
