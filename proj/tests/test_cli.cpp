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
// Runs the command-line tool as a subprocess.
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Workspace {
 public:
  Workspace() {
    static int counter = 0;
    dir_ = fs::temp_directory_path() /
           ("tetradec_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Workspace() { fs::remove_all(dir_); }

  std::string path(const std::string& leaf) const { return (dir_ / leaf).string(); }

  // `args` is appended to the tool path verbatim; `env` is prefixed.
  Result run(const std::string& args, const std::string& env = "") const {
    const std::string err_file = path("stderr.txt");
    const std::string cmd = "cd '" + dir_.string() + "' && " + env + " '" TETRADEC_CLI_PATH
                            "' " + args + " 2>'" + err_file + "'";
    Result r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    size_t n;
    while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
    const int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(err_file);
    return r;
  }

  void write(const std::string& leaf, const std::string& text) const {
    std::ofstream(path(leaf), std::ios::binary) << text;
  }
  std::string read(const std::string& leaf) const { return slurp(path(leaf)); }

 private:
  fs::path dir_;
};

double ap_of(const Result& r) { return nlohmann::json::parse(r.out)["ap"].get<double>(); }

}  // namespace

TEST_CASE("zero-noise synth, encode, decode and eval give AP 1") {
  Workspace ws;
  REQUIRE(ws.run("synth --out s --num-images 6 --num-classes 2 --seed 3").code == 0);
  REQUIRE(ws.run("encode --annotations s/annotations.json --out enc --num-classes 2").code == 0);
  CHECK(fs::exists(ws.path("enc/img_000005.objects.json")));
  REQUIRE(ws.run("decode --dir enc --out dets.json").code == 0);
  const Result r = ws.run("eval --detections dets.json --annotations s/annotations.json");
  REQUIRE(r.code == 0);
  CHECK(ap_of(r) == 1.0);
  const Result u = ws.run("eval-usecase --detections dets.json --annotations s/annotations.json");
  CHECK(u.code != 2);
}

TEST_CASE("loss-check passes on default seeds") {
  Workspace ws;
  const Result r = ws.run("loss-check");
  CHECK(r.code == 0);
  CHECK(r.out.find("total") != std::string::npos);
  CHECK(r.out.find("FAILED") == std::string::npos);
}

TEST_CASE("an impossible loss-check tolerance fails with exit 1") {
  Workspace ws;
  const Result r = ws.run("loss-check --seeds 1 --tolerance 0");
  CHECK(r.code == 1);
}

TEST_CASE("eval with an empty detection file reports AP 0") {
  Workspace ws;
  REQUIRE(ws.run("synth --out s --num-images 2").code == 0);
  ws.write("empty.json", R"({"images":[]})");
  const Result r = ws.run("eval --detections empty.json --annotations s/annotations.json");
  REQUIRE(r.code == 0);
  CHECK(ap_of(r) == 0.0);
}

TEST_CASE("malformed input exits 2 naming file and byte offset") {
  Workspace ws;
  REQUIRE(ws.run("synth --out s --num-images 1").code == 0);
  ws.write("bad.json", "{\"images\": [}");
  const Result r = ws.run("eval --detections bad.json --annotations s/annotations.json");
  CHECK(r.code == 2);
  CHECK(r.err.find("bad.json") != std::string::npos);
  CHECK(r.err.find("byte 12") != std::string::npos);

  ws.write("short.heat.tensor", "{\"dtype\":\"f32\",\"shape\":[4]}\nabc");
  const Result t = ws.run("decode --input short --out d.json");
  CHECK(t.code == 2);
  CHECK(t.err.find("short.heat.tensor") != std::string::npos);

  ws.write("mask.pgm", "P5\n4 4\n255\n");
  const Result m = ws.run("fit-mask mask.pgm");
  CHECK(m.code == 2);
  CHECK(m.err.find("mask.pgm") != std::string::npos);
}

TEST_CASE("usage errors and missing files exit 1") {
  Workspace ws;
  CHECK(ws.run("decode").code == 1);
  CHECK(ws.run("no-such-command").code == 1);
  CHECK(ws.run("eval --detections nope.json --annotations nope.json").code == 1);
  CHECK(ws.run("--help").code == 0);
}

TEST_CASE("config file supplies defaults and explicit flags win") {
  Workspace ws;
  ws.write("cfg.json", R"({"num_images": 3, "seed": 11, "warp": 0.0})");
  REQUIRE(ws.run("synth --config cfg.json --out a").code == 0);
  REQUIRE(ws.run("synth --out b --num-images 3 --seed 11 --warp 0").code == 0);
  CHECK(ws.read("a/annotations.json") == ws.read("b/annotations.json"));
  REQUIRE(ws.run("synth --config cfg.json --out c --num-images 1").code == 0);
  const auto c = nlohmann::json::parse(ws.read("c/annotations.json"));
  CHECK(c["images"].size() == 1u);
  ws.write("broken.json", "{\"seed\": }");
  const Result r = ws.run("synth --config broken.json --out d");
  CHECK(r.code == 2);
  CHECK(r.err.find("broken.json") != std::string::npos);
}

TEST_CASE("outputs are byte identical across runs and job counts") {
  Workspace ws;
  const std::string synth = "synth --num-images 8 --seed 5 --heat-sigma 0.05 --distractors 3";
  REQUIRE(ws.run(synth + " --out a").code == 0);
  REQUIRE(ws.run(synth + " --out b").code == 0);
  CHECK(ws.read("a/annotations.json") == ws.read("b/annotations.json"));
  CHECK(ws.read("a/outputs/img_000007.heat.tensor") == ws.read("b/outputs/img_000007.heat.tensor"));
  CHECK(ws.read("a/outputs/img_000007.embed.tensor") ==
        ws.read("b/outputs/img_000007.embed.tensor"));
  REQUIRE(ws.run("decode --dir a/outputs --out d1.json --jobs 1").code == 0);
  REQUIRE(ws.run("decode --dir a/outputs --out d8.json --jobs 8").code == 0);
  CHECK(ws.read("d1.json") == ws.read("d8.json"));
  const Result e1 =
      ws.run("eval --detections d1.json --annotations a/annotations.json --jobs 1 --csv e1.csv");
  const Result e8 =
      ws.run("eval --detections d8.json --annotations a/annotations.json --jobs 8 --csv e8.csv");
  REQUIRE(e1.code == 0);
  CHECK(e1.out == e8.out);
  CHECK(ws.read("e1.csv") == ws.read("e8.csv"));
}

TEST_CASE("TETRADEC_SEED is the seed fallback") {
  Workspace ws;
  REQUIRE(ws.run("synth --out env --num-images 2", "TETRADEC_SEED=21").code == 0);
  REQUIRE(ws.run("synth --out flag --num-images 2 --seed 21").code == 0);
  REQUIRE(ws.run("synth --out zero --num-images 2", "env -u TETRADEC_SEED").code == 0);
  CHECK(ws.read("env/annotations.json") == ws.read("flag/annotations.json"));
  CHECK(ws.read("env/annotations.json") != ws.read("zero/annotations.json"));
  REQUIRE(ws.run("synth --out over --num-images 2 --seed 0", "TETRADEC_SEED=21").code == 0);
  CHECK(ws.read("over/annotations.json") == ws.read("zero/annotations.json"));
}

TEST_CASE("fit-mask, rectify and render-heat write their outputs") {
  Workspace ws;
  std::string pgm = "P5\n20 20\n255\n";
  for (int r = 0; r < 20; ++r) {
    for (int c = 0; c < 20; ++c) pgm += (r >= 4 && r < 16 && c >= 3 && c < 18) ? '\xff' : '\0';
  }
  ws.write("mask.pgm", pgm);
  const Result fit = ws.run("fit-mask mask.pgm --out fit.json");
  REQUIRE(fit.code == 0);
  const auto j = nlohmann::json::parse(ws.read("fit.json"));
  CHECK(j["iou"] == 1.0);
  CHECK(j["corners"]["br"][0] == 18.0);

  std::string ppm = "P6\n20 20\n255\n";
  for (int i = 0; i < 20 * 20 * 3; ++i) ppm += static_cast<char>(i % 200);
  ws.write("img.ppm", ppm);
  ws.write("quad.json", R"({"corners":{"tl":[0,0],"tr":[20,0],"bl":[0,20],"br":[20,20]}})");
  REQUIRE(ws.run("rectify --image img.ppm --tetragon quad.json --width 20 --height 20 "
                 "--out rect.ppm").code == 0);
  CHECK(ws.read("rect.ppm") == ppm);

  REQUIRE(ws.run("synth --out s --num-images 1 --img-w 128 --img-h 64 "
                 "--max-side-fraction 0.5 --max-objects 1").code == 0);
  REQUIRE(ws.run("render-heat --input s/outputs/img_000000 --out heat.ppm --scale 2").code == 0);
  CHECK(ws.read("heat.ppm").rfind("P6\n256 32\n255\n", 0) == 0);
}
