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

#include "aimbot/geometry.hpp"

#include <cmath>
#include <sstream>

#include "aimbot/error.hpp"

namespace aimbot {

namespace {

constexpr double kDepthEpsilon = 1e-9;
constexpr double kPixelLimit = 1073741824.0;  // 2^30

int saturating_floor(double value) {
  const double f = std::floor(value);
  if (f > kPixelLimit) return static_cast<int>(kPixelLimit);
  if (f < -kPixelLimit) return static_cast<int>(-kPixelLimit);
  return static_cast<int>(f);
}

void check_unit(const Quat& q) {
  const double n = q.norm();
  if (!std::isfinite(n) || std::abs(n - 1.0) > kUnitQuatTolerance) {
    std::ostringstream os;
    os << "quaternion is not unit length (norm " << n << ")";
    throw ValidationError(os.str());
  }
}

}  // namespace

void Pose::validate() const {
  if (!position.allFinite()) {
    throw ValidationError("pose position is not finite");
  }
  check_unit(orientation);
}

Mat4 Pose::matrix() const {
  Mat4 m = Mat4::Identity();
  m.topLeftCorner<3, 3>() = orientation.normalized().toRotationMatrix();
  m.topRightCorner<3, 1>() = position;
  return m;
}

void CameraIntrinsics::validate() const {
  if (!(std::isfinite(fx) && std::isfinite(fy) && std::isfinite(cx) &&
        std::isfinite(cy))) {
    throw ValidationError("intrinsics must be finite");
  }
  if (!(fx > 0.0 && fy > 0.0)) {
    throw ValidationError("focal lengths must be positive");
  }
  if (width < 1 || height < 1) {
    throw ValidationError("image size must be at least 1x1");
  }
}

std::string rigidity_violation(const Mat4& m, double tol) {
  if (!m.allFinite()) return "matrix has non-finite entries";
  if (m(3, 0) != 0.0 || m(3, 1) != 0.0 || m(3, 2) != 0.0 || m(3, 3) != 1.0) {
    return "bottom row is not (0, 0, 0, 1)";
  }
  const Mat3 r = m.topLeftCorner<3, 3>();
  const double ortho = (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (ortho > tol) {
    std::ostringstream os;
    os << "rotation block is not orthonormal (max deviation " << ortho << ")";
    return os.str();
  }
  const double det = r.determinant();
  if (std::abs(det - 1.0) > tol) {
    std::ostringstream os;
    os << "rotation block determinant is " << det << ", expected +1";
    return os.str();
  }
  return {};
}

Mat4 rigid_inverse(const Mat4& m) {
  const Mat3 rt = m.topLeftCorner<3, 3>().transpose();
  Mat4 inv = Mat4::Identity();
  inv.topLeftCorner<3, 3>() = rt;
  inv.topRightCorner<3, 1>() = -(rt * m.topRightCorner<3, 1>());
  return inv;
}

CameraExtrinsics CameraExtrinsics::from_matrix(const Mat4& world_to_camera) {
  if (auto why = rigidity_violation(world_to_camera); !why.empty()) {
    throw ValidationError("extrinsics: " + why);
  }
  return CameraExtrinsics(world_to_camera);
}

CameraExtrinsics CameraExtrinsics::look_at(const Vec3& eye, const Vec3& target,
                                           const Vec3& up) {
  const Vec3 forward = target - eye;
  if (!(forward.norm() > 0.0)) {
    throw ValidationError("look_at: eye and target coincide");
  }
  const Vec3 z = forward.normalized();
  Vec3 x = z.cross(up);
  if (x.norm() < 1e-9) {
    // Looking along `up`; any perpendicular reference works.
    x = z.cross(std::abs(z.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY());
    x = -x;
  }
  x.normalize();
  const Vec3 y = z.cross(x);
  Mat4 m = Mat4::Identity();
  m.block<1, 3>(0, 0) = x.transpose();
  m.block<1, 3>(1, 0) = y.transpose();
  m.block<1, 3>(2, 0) = z.transpose();
  m.topRightCorner<3, 1>() = -(m.topLeftCorner<3, 3>() * eye);
  return from_matrix(m);
}

PixelProjection world_to_image(const Vec3& p_world,
                               const CameraExtrinsics& extr,
                               const CameraIntrinsics& intr) {
  if (!p_world.allFinite()) {
    throw ValidationError("world_to_image: point is not finite");
  }
  const Mat4& e = extr.matrix();
  const Vec3 p = e.topLeftCorner<3, 3>() * p_world + e.topRightCorner<3, 1>();
  if (std::abs(p.z()) < kDepthEpsilon) {
    return {kInvalidPixel, kInvalidPixel, 0.0};
  }
  return {saturating_floor(intr.fx * p.x() / p.z() + intr.cx),
          saturating_floor(intr.fy * p.y() / p.z() + intr.cy), p.z()};
}

Vec3 quat_to_direction(const Quat& q) {
  check_unit(q);
  const double w = q.w(), x = q.x(), y = q.y(), z = q.z();
  const Vec3 axis(2.0 * (x * z + w * y), 2.0 * (y * z - w * x),
                  1.0 - 2.0 * (x * x + y * y));
  return axis.normalized();
}

CameraExtrinsics compute_wrist_extrinsics(const Pose& ee_pose,
                                          const Mat4& hand_eye) {
  ee_pose.validate();
  if (auto why = rigidity_violation(hand_eye); !why.empty()) {
    throw ValidationError("hand_eye: " + why);
  }
  const Mat4 world_T_camera = ee_pose.matrix() * hand_eye;
  Mat4 inv = rigid_inverse(world_T_camera);
  inv.row(3) << 0.0, 0.0, 0.0, 1.0;
  return CameraExtrinsics::from_matrix(inv);
}

}  // namespace aimbot
