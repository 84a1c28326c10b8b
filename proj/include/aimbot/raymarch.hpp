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

#include <vector>

#include "aimbot/geometry.hpp"
#include "aimbot/image.hpp"
#include "aimbot/visibility.hpp"

namespace aimbot {

struct MarchConfig {
  double step_delta = 0.005;  // meters per step
  int tolerance = 5;          // consecutive invisible steps allowed
  double max_length = 2.0;    // meters along the pointing axis
  double epsilon = kDefaultVisibilityEpsilon;

  void validate() const;
  bool operator==(const MarchConfig&) const = default;
};

struct Pixel {
  int u = 0;
  int v = 0;

  bool operator==(const Pixel&) const = default;
};

struct RayMarchResult {
  std::vector<Vec3> points3d;
  std::vector<Pixel> points2d;
  std::vector<bool> visibility;

  /// Index of the last visible sample, or -1 when none was visible.
  int stop_index = -1;
  Pixel stop_pixel;
  Vec3 stop_point = Vec3::Zero();
  /// Distance from the gripper origin to `stop_point`.
  double projection_distance = 0.0;
  /// Projection of the gripper origin itself.
  PixelProjection origin;
};

/// Marches from the gripper origin along its pointing axis in steps of
/// `step_delta`, testing each sample against the depth buffer. Stops once
/// more than `tolerance` consecutive samples are invisible, or when the
/// next sample would lie beyond `max_length`. The stop point is the last
/// visible sample; with no visible sample it is the gripper origin and the
/// projection distance is zero.
RayMarchResult find_stop_point(const Pose& ee_pose, const CameraExtrinsics& extr,
                               const CameraIntrinsics& intr,
                               const DepthImage& depth, const MarchConfig& cfg);

}  // namespace aimbot
