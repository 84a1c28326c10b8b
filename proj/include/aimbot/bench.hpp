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

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aimbot/dataset.hpp"
#include "aimbot/overlay.hpp"
#include "aimbot/raymarch.hpp"
#include "aimbot/synthscene.hpp"

namespace aimbot {

inline constexpr int kWarmupIterations = 10;
inline constexpr int kMinTimedSamples = 100;
inline constexpr int kMinBenchIterations = kWarmupIterations + kMinTimedSamples;

/// Nearest-rank percentiles, nanoseconds.
struct Percentiles {
  double p50 = 0.0;
  double p95 = 0.0;
  double p99 = 0.0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;

  bool operator==(const Percentiles&) const = default;
};

Percentiles compute_percentiles(std::span<const std::int64_t> samples_ns);

struct WorkloadDescriptor {
  int width = 0;
  int height = 0;
  std::string style;
  std::vector<std::string> roles;
  std::size_t frames = 0;

  bool operator==(const WorkloadDescriptor&) const = default;
};

struct HardwareDescriptor {
  std::string cpu;
  unsigned threads = 0;
  std::string compiler;

  bool operator==(const HardwareDescriptor&) const = default;
};

HardwareDescriptor detect_hardware();
/// "release" when built with NDEBUG, otherwise "debug".
std::string build_mode();

struct LatencyReport {
  WorkloadDescriptor workload;
  HardwareDescriptor hardware;
  std::string build;
  int warmup = kWarmupIterations;
  std::vector<std::int64_t> bundle_ns;  // one per timed iteration, all cameras
  std::vector<std::int64_t> image_ns;   // one per rendered view
  Percentiles bundle;
  Percentiles image;

  bool operator==(const LatencyReport&) const = default;
};

/// Times augment_frame over `iters` iterations, cycling through `frames`.
/// The first kWarmupIterations are discarded. Decoding and encoding are
/// outside the timed region. Throws ValidationError when iters < 110 or
/// `frames` is empty.
LatencyReport time_augment(std::span<const FrameBundle> frames, const MarchConfig& cfg,
                           const RenderStyle& style, int iters);
LatencyReport time_augment(const FrameBundle& frame, const MarchConfig& cfg,
                           const RenderStyle& style, int iters);

/// One JSON object, no trailing newline.
std::string to_json_line(const LatencyReport& report);
LatencyReport parse_json_line(std::string_view line);

/// Tabletop scene with one fixed and one wrist camera of `size` x `size`
/// pixels, used as the reference latency workload.
SceneDescription reference_scene(int size = 256);
/// Reference frame: gripper above the table pointing down, images rendered
/// from `reference_scene(size)`.
FrameBundle reference_frame(int size = 256, bool gripper_open = true);

}  // namespace aimbot
