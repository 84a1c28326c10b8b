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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aimbot/geometry.hpp"
#include "aimbot/image.hpp"
#include "aimbot/raymarch.hpp"

namespace aimbot {

enum class StyleVariant {
  kDefault,
  kPlainColor,
  kGraspSense,
  kFixedLength,
  kSmallScale,
  kBullseye,
  kRandomized,
};

std::string_view to_string(StyleVariant v);
/// Accepts the canonical names ("plain_color") and dashed aliases ("plain-color").
std::optional<StyleVariant> parse_style_variant(std::string_view name);
const std::vector<StyleVariant>& all_style_variants();

inline constexpr int kReferenceHeight = 256;

struct RenderStyle {
  StyleVariant variant = StyleVariant::kDefault;

  Rgb open_line_color{0, 255, 0};
  Rgb closed_line_color{128, 0, 128};
  Rgb open_dot_color{255, 0, 0};
  Rgb closed_dot_color{0, 0, 255};
  Rgb grasp_color{255, 165, 0};
  Rgb plain_color{128, 128, 128};

  int line_thickness = 2;        // pixels
  int dot_radius = 4;            // pixels
  double min_reticle_len = 10.0; // pixels, arm length from the center
  double max_reticle_len = 60.0;
  double max_ee_to_surface = 0.5;  // meters

  // Randomized variant only.
  double noise_pos_sigma = 0.02;  // meters, per axis
  double noise_rot_sigma = 0.1;   // radians
  std::uint64_t rng_seed = 0;

  // Grasp-sense variant only.
  double grasp_threshold = 0.12;  // meters

  /// Defaults with every pixel length scaled by height / 256.
  static RenderStyle for_image_height(int height,
                                      StyleVariant variant = StyleVariant::kDefault);

  /// Treats the pixel sizes as given for a 256-row image and rescales
  /// thickness, dot radius and reticle bounds to `height` rows.
  RenderStyle scaled_to_height(int height) const;

  void validate() const;
};

struct GripperState {
  Pose pose;
  bool open = true;
  std::optional<double> width;  // meters

  void validate() const;
};

/// Colors and sizes after the style variant has been applied to one frame.
struct ResolvedStyle {
  Rgb line_color;     // shooting line
  Rgb reticle_color;  // crosshair / bullseye
  Rgb dot_color;
  int thickness = 1;
  int dot_radius = 1;
  double min_reticle_len = 0.0;
  double max_reticle_len = 0.0;
  double max_ee_to_surface = 1.0;
  bool fixed_length = false;
  bool bullseye = false;
};

ResolvedStyle apply_style_variant(const RenderStyle& style,
                                  const GripperState& gripper,
                                  bool grasp_detected);

/// Reticle arm length in pixels: min + clamp((max_d - d) / max_d, 0, 1) *
/// (max - min), or the midpoint for fixed-length styles.
double reticle_arm_length(double projection_distance, const ResolvedStyle& style);

struct Segment {
  Pixel a;
  Pixel b;
  int thickness = 1;
  Rgb color;
};

struct Disk {
  Pixel center;
  int radius = 1;
  Rgb color;
};

struct Ring {
  Pixel center;
  double radius = 1.0;
  int thickness = 1;
  Rgb color;
};

/// Everything a render call will draw, in draw order: segments, then
/// rings, then disks.
struct OverlayPlan {
  bool early_return = true;
  std::vector<Segment> segments;
  std::vector<Ring> rings;
  std::vector<Disk> disks;
  RayMarchResult march;
  double arm_length = 0.0;  // wrist views only
};

/// Draws the plan onto `image` in place; every write is clipped to bounds.
void rasterize(const OverlayPlan& plan, RgbImage& image);

OverlayPlan plan_fixed(const DepthImage& depth, const CameraExtrinsics& extr,
                       const CameraIntrinsics& intr, const GripperState& gripper,
                       const MarchConfig& cfg, const RenderStyle& style,
                       bool grasp_detected = false);

OverlayPlan plan_wrist(const DepthImage& depth, const CameraExtrinsics& extr,
                       const CameraIntrinsics& intr, const GripperState& gripper,
                       const MarchConfig& cfg, const RenderStyle& style,
                       bool grasp_detected = false);

struct RenderOutcome {
  RgbImage image;
  OverlayPlan plan;
};

/// Shooting line on a fixed camera. If the gripper origin is not visible
/// the input is returned unchanged. Otherwise an open gripper gets one line
/// over the longest visible run of march samples, a closed gripper gets a
/// line over every visible run, and a dot marks the gripper origin.
RenderOutcome render_fixed(const RgbImage& image, const DepthImage& depth,
                           const CameraExtrinsics& extr, const CameraIntrinsics& intr,
                           const GripperState& gripper, const MarchConfig& cfg,
                           const RenderStyle& style, bool grasp_detected = false);

/// Crosshair (or bullseye) reticle on a wrist camera, centered on the stop
/// pixel, with arm length shrinking as the projection distance grows. Only
/// a gripper origin behind the camera suppresses the reticle.
RenderOutcome render_wrist(const RgbImage& image, const DepthImage& depth,
                           const CameraExtrinsics& extr, const CameraIntrinsics& intr,
                           const GripperState& gripper, const MarchConfig& cfg,
                           const RenderStyle& style, bool grasp_detected = false);

inline constexpr double kDefaultGraspThreshold = 0.12;

/// True when the 10th percentile of valid wrist depth inside a square window
/// around the projected gripper origin is below `threshold`. The window is
/// 1/8 of the shorter image side; it falls back to the image center when
/// the origin does not project into the image.
bool grasp_sense(const DepthImage& depth_wrist, const CameraExtrinsics& extr_wrist,
                 const CameraIntrinsics& intr, const GripperState& gripper,
                 double threshold = kDefaultGraspThreshold);

/// Gripper state with a reproducible pose perturbation keyed by
/// (style.rng_seed, frame_index, camera_id).
GripperState randomize_cue(const GripperState& gripper, const RenderStyle& style,
                           std::uint64_t frame_index, std::string_view camera_id);

}  // namespace aimbot
