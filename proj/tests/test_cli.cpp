// Copyright 2026 The aimbot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "aimbot/cli.hpp"
#include "aimbot/dataset.hpp"
#include "aimbot/png_io.hpp"
#include "doctest.h"
#include "support/episodes.hpp"
#include "support/oracles.hpp"
#include "support/temp_dir.hpp"

using namespace aimbot;
using aimbot::testing::TempDir;
using aimbot::testing::snapshot_tree;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "aimbot");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliResult r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string data(const std::string& name) { return std::string(AIMBOT_DATA_DIR) + "/" + name; }

void synth_tabletop(const fs::path& dir, int frames = 20) {
  const auto r = run_cli({"synth", "--scene", data("tabletop.scene"), "--trajectory",
                          data("descent.traj"), "--frames", std::to_string(frames), "--output",
                          dir.string()});
  REQUIRE(r.code == 0);
}

const char* kPlaneScene =
    "plane normal=0,0,1 offset=0\n"
    "camera id=top role=fixed width=64 height=64 fov=60 eye=0.4,0,1.2 target=0,0,0\n";

const char* kLinearDescent =
    "waypoint t=0 pos=0,0,0.8 quat=0,1,0,0 open=1\n"
    "waypoint t=1 pos=0,0,0.2 quat=0,1,0,0 open=1\n";

void edit_manifest(const fs::path& dir, const std::function<void(EpisodeManifest&)>& fn) {
  auto m = read_manifest(dir / kManifestName);
  fn(m);
  write_manifest(dir / kManifestName, m);
}

struct EnvGuard {
  std::string name;
  explicit EnvGuard(std::string n, const std::string& value) : name(std::move(n)) {
    setenv(name.c_str(), value.c_str(), 1);
  }
  ~EnvGuard() { unsetenv(name.c_str()); }
};

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(run_cli({}).code == cli::kExitUsage);
  CHECK(run_cli({"frobnicate"}).code == cli::kExitUsage);
  CHECK(run_cli({"augment", "--input", "x"}).code == cli::kExitUsage);
  CHECK(run_cli({"augment", "--input", "x", "--output", "y", "--style", "neon"}).code ==
        cli::kExitUsage);
  CHECK(run_cli({"bench", "--iters", "50"}).code == cli::kExitUsage);
  CHECK(run_cli({"augment", "--input", "x", "--output", "y", "--jobs", "0"}).code ==
        cli::kExitUsage);
  CHECK(run_cli({"--help"}).code == cli::kExitOk);
}

TEST_CASE("an invalid flag value fails before touching the filesystem") {
  TempDir tmp;
  const fs::path out = tmp / "never";
  for (const auto& flag : std::vector<std::vector<std::string>>{
           {"--delta", "-1"}, {"--epsilon", "0"}, {"--tolerance", "-3"},
           {"--max-length", "-2"}, {"--noise-pos", "-0.1"}}) {
    std::vector<std::string> args = {"augment", "--input", (tmp / "missing").string(),
                                     "--output", out.string()};
    args.insert(args.end(), flag.begin(), flag.end());
    CHECK(run_cli(args).code == cli::kExitUsage);
    CHECK_FALSE(fs::exists(out));
  }
}

TEST_CASE("augment: clean episode exits 0 with a summary") {
  TempDir in, out;
  synth_tabletop(in.path(), 6);
  const auto r = run_cli({"augment", "--input", in.path().string(), "--output",
                          out.path().string(), "--jobs", "2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("augmented 6 frames (18 images)") != std::string::npos);
  CHECK(r.out.find("front=") != std::string::npos);
  CHECK(fs::exists(out / kManifestName));
}

TEST_CASE("augment: data errors exit 1") {
  TempDir tmp;
  CHECK(run_cli({"augment", "--input", (tmp / "nope").string(), "--output",
                 (tmp / "out").string()})
            .code == cli::kExitDataError);
  TempDir in, out;
  synth_tabletop(in.path(), 3);
  write_png_rgb(in / "side/rgb_0001.png", RgbImage(16, 16));
  const auto r = run_cli({"augment", "--input", in.path().string(), "--output",
                          out.path().string()});
  CHECK(r.code == cli::kExitDataError);
  CHECK(r.err.find("frame 1") != std::string::npos);
}

TEST_CASE("augment: bullseye style draws concentric rings on the wrist view") {
  TempDir in, out;
  synth_tabletop(in.path(), 4);
  REQUIRE(run_cli({"augment", "--input", in.path().string(), "--output", out.path().string(),
                   "--style", "bullseye"})
              .code == 0);
  const auto ep = load_episode(in.path());
  for (std::size_t i = 0; i < ep.frame_count(); ++i) {
    const auto f = ep.frame(i);
    const CameraView& w = f.views[2];
    const auto plan = plan_wrist(w.depth, w.extrinsics, w.intrinsics, f.gripper, {},
                                 [] {
                                   RenderStyle s;
                                   s.variant = StyleVariant::kBullseye;
                                   return s;
                                 }());
    REQUIRE(plan.rings.size() == 3);
    char name[32];
    std::snprintf(name, sizeof(name), "wrist/rgb_%04zu.png", i);
    const RgbImage img = read_png_rgb(out / name);
    const Pixel c = plan.march.stop_pixel;
    for (const auto& ring : plan.rings) {
      std::size_t hits = 0, probes = 0;
      for (double a = 0; a < 2 * M_PI; a += M_PI / 16) {
        const int u = static_cast<int>(std::lround(c.u + ring.radius * std::cos(a)));
        const int v = static_cast<int>(std::lround(c.v + ring.radius * std::sin(a)));
        if (!img.contains(u, v)) continue;
        ++probes;
        bool found = false;
        for (int dv = -1; dv <= 1; ++dv) {
          for (int du = -1; du <= 1; ++du) {
            if (img.contains(u + du, v + dv) && img.at(u + du, v + dv) == Rgb{0, 255, 0}) {
              found = true;
            }
          }
        }
        hits += found;
      }
      CHECK(probes > 0);
      CHECK(hits == probes);
    }
  }
}

TEST_CASE("render-frame writes the same pixels as augment") {
  TempDir in, out, single;
  synth_tabletop(in.path(), 5);
  REQUIRE(run_cli({"augment", "--input", in.path().string(), "--output", out.path().string()})
              .code == 0);
  for (const std::string cam : {"front", "wrist"}) {
    const fs::path png = single / (cam + ".png");
    const auto r = run_cli({"render-frame", "--input", in.path().string(), "--frame", "2",
                            "--camera", cam, "--output", png.string()});
    CHECK(r.code == 0);
    CHECK(testing::read_bytes(png) == testing::read_bytes(out / (cam + "/rgb_0002.png")));
  }
  CHECK(run_cli({"render-frame", "--input", in.path().string(), "--frame", "5", "--camera",
                 "front", "--output", (single / "x.png").string()})
            .code == cli::kExitUsage);
  CHECK(run_cli({"render-frame", "--input", in.path().string(), "--frame", "0", "--camera",
                 "top", "--output", (single / "x.png").string()})
            .code == cli::kExitUsage);
  CHECK_FALSE(fs::exists(single / "x.png"));
}

TEST_CASE("synth: plane scene with a linear descent") {
  TempDir tmp;
  testing::write_text(tmp / "plane.scene", kPlaneScene);
  testing::write_text(tmp / "down.traj", kLinearDescent);
  const auto r = run_cli({"synth", "--scene", (tmp / "plane.scene").string(), "--trajectory",
                          (tmp / "down.traj").string(), "--frames", "20", "--output",
                          (tmp / "ep").string()});
  REQUIRE(r.code == 0);
  const auto m = read_manifest(tmp / "ep" / kManifestName);
  CHECK(m.frames.size() == 20);
  const auto gt = read_ground_truth(tmp / "ep" / kGroundTruthName);
  REQUIRE(gt.size() == 20);
  for (std::size_t i = 0; i < gt.size(); ++i) {
    CHECK(gt[i].hit);
    CHECK(gt[i].distance == doctest::Approx(m.frames[i].pos[2]).epsilon(1e-12));
    if (i > 0) CHECK(gt[i].distance < gt[i - 1].distance);
  }
  CHECK(run_cli({"validate", "--input", (tmp / "ep").string()}).code == 0);
}

TEST_CASE("synth: empty scene caps every distance") {
  TempDir tmp;
  testing::write_text(tmp / "empty.scene",
                      "camera id=top role=fixed width=32 height=32 fov=60 eye=0.4,0,1.2 "
                      "target=0,0,0\n");
  testing::write_text(tmp / "down.traj", kLinearDescent);
  REQUIRE(run_cli({"synth", "--scene", (tmp / "empty.scene").string(), "--trajectory",
                   (tmp / "down.traj").string(), "--frames", "5", "--max-length", "1.5",
                   "--output", (tmp / "ep").string()})
              .code == 0);
  const auto gt = read_ground_truth(tmp / "ep" / kGroundTruthName);
  REQUIRE(gt.size() == 5);
  for (const auto& g : gt) {
    CHECK_FALSE(g.hit);
    CHECK(g.distance == 1.5);
  }
}

TEST_CASE("synth: the tabletop descent approaches the box") {
  TempDir tmp;
  synth_tabletop(tmp.path(), 20);
  const auto gt = read_ground_truth(tmp / kGroundTruthName);
  CHECK(gt.size() == 60);
  double prev = 1e9;
  for (const auto& g : gt) {
    if (g.camera != "front") continue;
    CHECK(g.hit);
    CHECK(g.distance <= prev + 1e-12);
    prev = g.distance;
  }
}

TEST_CASE("synth: malformed inputs exit 1 with the line number") {
  TempDir tmp;
  testing::write_text(tmp / "bad.scene", "plane normal=0,0,1 offset=0\nsphere radius=1\n");
  testing::write_text(tmp / "down.traj", kLinearDescent);
  const auto r = run_cli({"synth", "--scene", (tmp / "bad.scene").string(), "--trajectory",
                          (tmp / "down.traj").string(), "--output", (tmp / "ep").string()});
  CHECK(r.code == cli::kExitDataError);
  CHECK(r.err.find("bad.scene:2:") != std::string::npos);
}

TEST_CASE("validate: clean episode and seeded corruption") {
  TempDir tmp;
  synth_tabletop(tmp.path(), 3);
  auto r = run_cli({"validate", "--input", tmp.path().string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("ok: 3 frames, 3 cameras") != std::string::npos);

  SUBCASE("reflected extrinsics") {
    edit_manifest(tmp.path(), [](EpisodeManifest& m) {
      Mat4 e = to_mat4(*m.cameras[1].extrinsics);
      e.row(0) *= -1.0;
      m.cameras[1].extrinsics = to_matrix16(e);
    });
    r = run_cli({"validate", "--input", tmp.path().string()});
    CHECK(r.code == cli::kExitDataError);
    CHECK(r.err.find("camera 'side'") != std::string::npos);
    CHECK(r.err.find("determinant") != std::string::npos);
  }
  SUBCASE("missing file") {
    fs::remove(tmp / "wrist/depth_0001.png");
    r = run_cli({"validate", "--input", tmp.path().string()});
    CHECK(r.code == cli::kExitDataError);
    CHECK(r.err.find("depth_0001.png") != std::string::npos);
    CHECK(r.err.find("frame 1") != std::string::npos);
  }
  SUBCASE("size mismatch") {
    write_png_depth(tmp / "front/depth_0002.png", DepthImage(128, 128, 1.0));
    r = run_cli({"validate", "--input", tmp.path().string()});
    CHECK(r.code == cli::kExitDataError);
    CHECK(r.err.find("frame 2") != std::string::npos);
    CHECK(r.err.find("256x256") != std::string::npos);
    CHECK(r.err.find("128x128") != std::string::npos);
  }
  SUBCASE("unreadable manifest") {
    testing::write_text(tmp / kManifestName, "[]");
    r = run_cli({"validate", "--input", tmp.path().string()});
    CHECK(r.code == cli::kExitDataError);
  }
}

TEST_CASE("jobs count does not change the output") {
  TempDir in, a, b;
  synth_tabletop(in.path(), 6);
  REQUIRE(run_cli({"augment", "--input", in.path().string(), "--output", a.path().string(),
                   "--jobs", "1"})
              .code == 0);
  REQUIRE(run_cli({"augment", "--input", in.path().string(), "--output", b.path().string(),
                   "--jobs", "5"})
              .code == 0);
  CHECK(snapshot_tree(a.path()) == snapshot_tree(b.path()));
}

TEST_CASE("commands never modify the input episode") {
  TempDir in, out;
  synth_tabletop(in.path(), 3);
  const auto before = snapshot_tree(in.path());
  run_cli({"augment", "--input", in.path().string(), "--output", out.path().string(),
           "--style", "randomized", "--seed", "9"});
  run_cli({"validate", "--input", in.path().string()});
  run_cli({"render-frame", "--input", in.path().string(), "--frame", "1", "--camera", "side",
           "--output", (out / "one.png").string()});
  run_cli({"bench", "--input", in.path().string(), "--iters", "110"});
  CHECK(snapshot_tree(in.path()) == before);
}

TEST_CASE("flag values can come from a config file") {
  TempDir in, a, b, c;
  synth_tabletop(in.path(), 2);
  const fs::path cfg = a / "flags.ini";
  testing::write_text(cfg, "[augment]\nstyle = \"plain_color\"\n");
  REQUIRE(run_cli({"augment", "--input", in.path().string(), "--output", (b / "x").string(),
                   "--style", "plain_color"})
              .code == 0);
  REQUIRE(run_cli({"--config", cfg.string(), "augment", "--input", in.path().string(),
                   "--output", (b / "y").string()})
              .code == 0);
  CHECK(snapshot_tree(b / "x") == snapshot_tree(b / "y"));
  REQUIRE(run_cli({"augment", "--input", in.path().string(), "--output", (b / "z").string()})
              .code == 0);
  CHECK_FALSE(snapshot_tree(b / "x") == snapshot_tree(b / "z"));
  REQUIRE(run_cli({"augment", "--input", in.path().string(), "--output", (b / "w").string(),
                   "--style", "plain-color"})
              .code == 0);
  CHECK(snapshot_tree(b / "x") == snapshot_tree(b / "w"));
  {
    EnvGuard env("AIMBOT_CONFIG", cfg.string());
    REQUIRE(run_cli({"augment", "--input", in.path().string(), "--output", c.path().string()})
                .code == 0);
  }
  CHECK(snapshot_tree(b / "x") == snapshot_tree(c.path()));
}

TEST_CASE("bench prints milliseconds and a JSON line") {
  TempDir tmp;
  const auto r = run_cli({"bench", "--iters", "120", "--json", (tmp / "r.jsonl").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("p50") != std::string::npos);
  CHECK(r.out.find(" ms") != std::string::npos);
  CHECK(r.out.find("256x256") != std::string::npos);
  const std::string line = testing::read_bytes(tmp / "r.jsonl");
  CHECK(line.find("\"p50\"") != std::string::npos);
  CHECK(r.out.find(line.substr(0, line.size() - 1)) != std::string::npos);
}
