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

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "aimbot/geometry.hpp"
#include "aimbot/image.hpp"

namespace aimbot {

/// Half-space boundary {x : normal . x = offset}; normal is unit length.
struct Plane {
  Vec3 normal = Vec3::UnitZ();
  double offset = 0.0;
};

struct Sphere {
  Vec3 center = Vec3::Zero();
  double radius = 1.0;
};

/// Axis-aligned box.
struct Box {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Ones();
};

using Shape = std::variant<Plane, Sphere, Box>;

struct Primitive {
  Shape shape;
  Rgb color{180, 180, 180};
};

/// Analytic world made of primitives. Pixels that hit nothing have no depth.
struct Scene {
  std::vector<Primitive> primitives;

  void validate() const;
};

struct Hit {
  Vec3 point = Vec3::Zero();
  double distance = 0.0;
  Vec3 normal = Vec3::UnitZ();  // outward surface normal
  std::size_t primitive = 0;
};

/// Nearest intersection with t > 0 along origin + t * dir (dir unit length).
std::optional<Hit> analytic_intersection(const Scene& scene, const Vec3& origin,
                                         const Vec3& dir);

/// Unit world-frame direction of the camera ray through a pixel center.
Vec3 pixel_ray(int u, int v, const CameraExtrinsics& extr,
               const CameraIntrinsics& intr);

/// Camera-frame z of the nearest hit through every pixel center; 0 where
/// the ray escapes.
DepthImage ray_cast_depth(const Scene& scene, const CameraExtrinsics& extr,
                          const CameraIntrinsics& intr);

/// Flat Lambert shading under one fixed directional light, for inspection.
RgbImage shade_scene(const Scene& scene, const CameraExtrinsics& extr,
                     const CameraIntrinsics& intr);

// ---------------------------------------------------------------------------
// Text descriptions. One record per line: `<kind> key=value ...`, vectors as
// comma-separated numbers, `#` starts a comment.
//
//   plane  normal=X,Y,Z offset=D [color=R,G,B]
//   sphere center=X,Y,Z radius=R [color=R,G,B]
//   box    min=X,Y,Z max=X,Y,Z [color=R,G,B]
//   camera id=NAME role=fixed|wrist width=W height=H
//          (fx=F fy=F | fov=DEG) [cx=C cy=C]
//          fixed: eye=X,Y,Z target=X,Y,Z [up=X,Y,Z] | extrinsics=16 floats
//          wrist: offset=X,Y,Z | hand_eye=16 floats
//
//   waypoint t=T pos=X,Y,Z quat=W,X,Y,Z open=0|1 [width=M]
// ---------------------------------------------------------------------------

/// Thrown for malformed description files; the message carries
/// `source:line:` context.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CameraRole { kFixed, kWrist };

std::string_view to_string(CameraRole role);
std::optional<CameraRole> parse_camera_role(std::string_view name);

struct CameraSpec {
  std::string id;
  CameraRole role = CameraRole::kFixed;
  CameraIntrinsics intrinsics;
  Mat4 extrinsics = Mat4::Identity();  // world -> camera, fixed cameras
  Mat4 hand_eye = Mat4::Identity();    // camera pose in gripper frame, wrist cameras
};

struct SceneDescription {
  Scene scene;
  std::vector<CameraSpec> cameras;
};

SceneDescription parse_scene_description(std::string_view text,
                                         std::string_view source = "<scene>");

struct Waypoint {
  double t = 0.0;
  Pose pose;
  bool open = true;
  std::optional<double> width;
};

struct TrajectorySample {
  double t = 0.0;
  Pose pose;
  bool open = true;
  std::optional<double> width;
};

/// Piecewise-linear position, slerped orientation, and gripper state held
/// from the most recent waypoint.
class Trajectory {
 public:
  explicit Trajectory(std::vector<Waypoint> waypoints);

  TrajectorySample at(double t) const;
  /// `count` samples evenly spaced from the first to the last waypoint.
  std::vector<TrajectorySample> sample(int count) const;
  const std::vector<Waypoint>& waypoints() const { return waypoints_; }

 private:
  std::vector<Waypoint> waypoints_;
};

Trajectory parse_trajectory(std::string_view text,
                            std::string_view source = "<trajectory>");

}  // namespace aimbot
