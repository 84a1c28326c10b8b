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

#include "aimbot/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <thread>

#include <json.hpp>

#include "aimbot/error.hpp"

namespace aimbot {

using nlohmann::json;

Percentiles compute_percentiles(std::span<const std::int64_t> samples_ns) {
  Percentiles p;
  if (samples_ns.empty()) return p;
  std::vector<std::int64_t> s(samples_ns.begin(), samples_ns.end());
  std::sort(s.begin(), s.end());
  auto rank = [&](double q) {
    const auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(s.size())));
    return static_cast<double>(s[std::clamp<std::size_t>(k, 1, s.size()) - 1]);
  };
  p.p50 = rank(0.50);
  p.p95 = rank(0.95);
  p.p99 = rank(0.99);
  p.min = static_cast<double>(s.front());
  p.max = static_cast<double>(s.back());
  p.mean = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
  return p;
}

HardwareDescriptor detect_hardware() {
  HardwareDescriptor h;
  h.threads = std::thread::hardware_concurrency();
  std::ifstream cpuinfo("/proc/cpuinfo");
  std::string line;
  while (std::getline(cpuinfo, line)) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) h.cpu = line.substr(line.find_first_not_of(' ', colon + 1));
      break;
    }
  }
  if (h.cpu.empty()) h.cpu = "unknown";
#if defined(__clang__)
  h.compiler = "clang " __clang_version__;
#elif defined(__GNUC__)
  h.compiler = "gcc " __VERSION__;
#else
  h.compiler = "unknown";
#endif
  return h;
}

std::string build_mode() {
#ifdef NDEBUG
  return "release";
#else
  return "debug";
#endif
}

LatencyReport time_augment(std::span<const FrameBundle> frames, const MarchConfig& cfg,
                           const RenderStyle& style, int iters) {
  if (frames.empty()) throw ValidationError("time_augment needs at least one frame");
  if (iters < kMinBenchIterations) {
    throw ValidationError("time_augment needs at least " +
                          std::to_string(kMinBenchIterations) + " iterations");
  }
  cfg.validate();
  style.validate();

  LatencyReport r;
  const FrameBundle& first = frames.front();
  if (!first.views.empty()) {
    r.workload.width = first.views.front().rgb.width();
    r.workload.height = first.views.front().rgb.height();
  }
  for (const auto& v : first.views) r.workload.roles.emplace_back(to_string(v.role));
  r.workload.style = std::string(to_string(style.variant));
  r.workload.frames = frames.size();
  r.hardware = detect_hardware();
  r.build = build_mode();
  r.warmup = kWarmupIterations;

  using clock = std::chrono::steady_clock;
  std::vector<FrameAugmentation> outputs(frames.size());
  for (int i = 0; i < iters; ++i) {
    const std::size_t slot = static_cast<std::size_t>(i) % frames.size();
    FrameAugmentation& aug = outputs[slot];
    const auto t0 = clock::now();
    augment_frame(frames[slot], cfg, style, aug);
    const auto t1 = clock::now();
    if (aug.error) throw ValidationError("benchmark frame failed: " + *aug.error);
    if (i < kWarmupIterations) continue;
    r.bundle_ns.push_back(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
    for (const auto& v : aug.views) {
      r.image_ns.push_back(static_cast<std::int64_t>(std::llround(v.render_seconds * 1e9)));
    }
  }
  r.bundle = compute_percentiles(r.bundle_ns);
  r.image = compute_percentiles(r.image_ns);
  return r;
}

LatencyReport time_augment(const FrameBundle& frame, const MarchConfig& cfg,
                           const RenderStyle& style, int iters) {
  return time_augment(std::span<const FrameBundle>(&frame, 1), cfg, style, iters);
}

namespace {

json percentiles_json(const Percentiles& p) {
  return {{"p50", p.p50}, {"p95", p.p95}, {"p99", p.p99},
          {"min", p.min}, {"max", p.max}, {"mean", p.mean}};
}

Percentiles percentiles_from(const json& j) {
  return {j.at("p50").get<double>(), j.at("p95").get<double>(), j.at("p99").get<double>(),
          j.at("min").get<double>(), j.at("max").get<double>(), j.at("mean").get<double>()};
}

}  // namespace

std::string to_json_line(const LatencyReport& r) {
  const json j = {
      {"type", "latency"},
      {"unit", "ns"},
      {"workload",
       {{"width", r.workload.width},
        {"height", r.workload.height},
        {"style", r.workload.style},
        {"roles", r.workload.roles},
        {"frames", r.workload.frames}}},
      {"hardware",
       {{"cpu", r.hardware.cpu}, {"threads", r.hardware.threads}, {"compiler", r.hardware.compiler}}},
      {"build", r.build},
      {"warmup", r.warmup},
      {"bundle", percentiles_json(r.bundle)},
      {"image", percentiles_json(r.image)},
      {"bundle_samples", r.bundle_ns},
      {"image_samples", r.image_ns},
  };
  return j.dump();
}

LatencyReport parse_json_line(std::string_view line) {
  try {
    const json j = json::parse(line);
    LatencyReport r;
    const json& w = j.at("workload");
    r.workload.width = w.at("width").get<int>();
    r.workload.height = w.at("height").get<int>();
    r.workload.style = w.at("style").get<std::string>();
    r.workload.roles = w.at("roles").get<std::vector<std::string>>();
    r.workload.frames = w.at("frames").get<std::size_t>();
    const json& h = j.at("hardware");
    r.hardware.cpu = h.at("cpu").get<std::string>();
    r.hardware.threads = h.at("threads").get<unsigned>();
    r.hardware.compiler = h.at("compiler").get<std::string>();
    r.build = j.at("build").get<std::string>();
    r.warmup = j.at("warmup").get<int>();
    r.bundle = percentiles_from(j.at("bundle"));
    r.image = percentiles_from(j.at("image"));
    r.bundle_ns = j.at("bundle_samples").get<std::vector<std::int64_t>>();
    r.image_ns = j.at("image_samples").get<std::vector<std::int64_t>>();
    return r;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("invalid latency report: ") + e.what());
  }
}

SceneDescription reference_scene(int size) {
  SceneDescription d;
  d.scene.primitives.push_back({Plane{Vec3::UnitZ(), 0.0}, Rgb{150, 140, 130}});
  d.scene.primitives.push_back({Box{Vec3(0.08, -0.10, 0.0), Vec3(0.20, 0.02, 0.10)}, Rgb{70, 130, 200}});
  d.scene.primitives.push_back({Sphere{Vec3(-0.12, 0.10, 0.05), 0.05}, Rgb{200, 70, 60}});

  CameraIntrinsics in;
  in.width = in.height = size;
  in.fx = in.fy = 0.5 * size / std::tan(0.5 * 60.0 * M_PI / 180.0);
  in.cx = in.cy = 0.5 * size;

  CameraSpec front;
  front.id = "front";
  front.role = CameraRole::kFixed;
  front.intrinsics = in;
  front.extrinsics =
      CameraExtrinsics::look_at(Vec3(0.9, 0.0, 0.7), Vec3(0.0, 0.0, 0.1)).matrix();
  d.cameras.push_back(front);

  CameraSpec wrist;
  wrist.id = "wrist";
  wrist.role = CameraRole::kWrist;
  wrist.intrinsics = in;
  wrist.hand_eye = Mat4::Identity();
  wrist.hand_eye.topRightCorner<3, 1>() = Vec3(0.0, 0.04, -0.06);
  d.cameras.push_back(wrist);
  return d;
}

FrameBundle reference_frame(int size, bool gripper_open) {
  const SceneDescription d = reference_scene(size);
  FrameBundle b;
  b.gripper.pose.position = Vec3(0.02, 0.0, 0.35);
  // Slightly tilted from straight down.
  b.gripper.pose.orientation =
      Quat(Eigen::AngleAxisd(M_PI - 0.15, Vec3(1.0, 0.3, 0.0).normalized()));
  b.gripper.open = gripper_open;
  for (const auto& cam : d.cameras) {
    CameraView v;
    v.id = cam.id;
    v.role = cam.role;
    v.intrinsics = cam.intrinsics;
    v.extrinsics = cam.role == CameraRole::kWrist
                       ? compute_wrist_extrinsics(b.gripper.pose, cam.hand_eye)
                       : CameraExtrinsics::from_matrix(cam.extrinsics);
    v.rgb = shade_scene(d.scene, v.extrinsics, v.intrinsics);
    v.depth = ray_cast_depth(d.scene, v.extrinsics, v.intrinsics);
    b.views.push_back(std::move(v));
  }
  return b;
}

}  // namespace aimbot
