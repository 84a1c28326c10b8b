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

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <string>

namespace aimbot {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Quat = Eigen::Quaterniond;  // constructed as Quat(w, x, y, z)

inline constexpr double kUnitQuatTolerance = 1e-6;
inline constexpr double kRigidTolerance = 1e-6;

/// Rigid body state of the gripper frame in world coordinates (meters).
struct Pose {
  Vec3 position = Vec3::Zero();
  Quat orientation = Quat::Identity();

  /// Throws ValidationError unless all components are finite and the
  /// quaternion norm is within kUnitQuatTolerance of one.
  void validate() const;

  /// world_T_gripper as a homogeneous matrix.
  Mat4 matrix() const;
};

struct CameraIntrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 1;
  int height = 1;

  void validate() const;
  bool operator==(const CameraIntrinsics&) const = default;
};

/// Returns an empty string when `m` is a rigid transform (orthonormal
/// rotation block with det +1 within `tol`, bottom row exactly 0 0 0 1),
/// otherwise a short description of the first violated property.
std::string rigidity_violation(const Mat4& m, double tol = kRigidTolerance);

/// Inverse of a rigid transform, computed as [R^T | -R^T t].
Mat4 rigid_inverse(const Mat4& m);

/// World-to-camera rigid transform. Always holds a validated matrix.
class CameraExtrinsics {
 public:
  CameraExtrinsics() = default;

  /// Throws ValidationError if `world_to_camera` is not rigid.
  static CameraExtrinsics from_matrix(const Mat4& world_to_camera);

  /// Camera placed at `eye` looking at `target`; image x to the right,
  /// image y down, optical axis forward.
  static CameraExtrinsics look_at(const Vec3& eye, const Vec3& target,
                                  const Vec3& up = Vec3::UnitZ());

  const Mat4& matrix() const { return m_; }
  Mat3 rotation() const { return m_.topLeftCorner<3, 3>(); }
  Vec3 translation() const { return m_.topRightCorner<3, 1>(); }
  /// Camera origin in world coordinates.
  Vec3 center() const { return -(rotation().transpose() * translation()); }

 private:
  explicit CameraExtrinsics(const Mat4& m) : m_(m) {}
  Mat4 m_ = Mat4::Identity();
};

/// Integer pixel (column u, row v) plus camera-frame depth z.
struct PixelProjection {
  int u = -1;
  int v = -1;
  double z = 0.0;

  bool operator==(const PixelProjection&) const = default;
};

/// Pixel coordinates assigned when the camera-frame depth is numerically
/// zero. Never inside any image.
inline constexpr int kInvalidPixel = -1;

/// Pinhole projection of a world point: p_cam = R p + T, then
/// floor(f x / z + c). Pixel coordinates beyond +-2^30 saturate there.
/// Throws ValidationError when `p_world` is not finite.
PixelProjection world_to_image(const Vec3& p_world,
                               const CameraExtrinsics& extr,
                               const CameraIntrinsics& intr);

/// Gripper pointing axis: the z column of the rotation of `q`, unit length.
/// Throws ValidationError when |q| is not within kUnitQuatTolerance of 1.
Vec3 quat_to_direction(const Quat& q);

/// World-to-camera extrinsics of a camera rigidly attached to the gripper.
/// `hand_eye` is the camera pose expressed in the gripper frame.
CameraExtrinsics compute_wrist_extrinsics(const Pose& ee_pose,
                                          const Mat4& hand_eye);

}  // namespace aimbot
