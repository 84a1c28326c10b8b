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

// Test-only reference computations. Nothing here calls the projection,
// visibility, or marching code under test.

#include <array>
#include <cmath>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "aimbot/geometry.hpp"
#include "aimbot/image.hpp"
#include "aimbot/overlay.hpp"
#include "aimbot/raymarch.hpp"
#include "aimbot/synthscene.hpp"

namespace aimbot::testing {

using Row4 = std::array<double, 4>;
using Mat4Rows = std::array<Row4, 4>;

inline Mat4Rows rows_of(const Mat4& m) {
  Mat4Rows r{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) r[i][j] = m(i, j);
  }
  return r;
}

struct OraclePixel {
  long u = 0;
  long v = 0;
  double z = 0.0;
};

/// Homogeneous 4x4 multiply followed by the pinhole divide, written out
/// element by element.
inline OraclePixel oracle_project(const Mat4Rows& e, double fx, double fy, double cx,
                                  double cy, const std::array<double, 3>& p) {
  const double h[4] = {p[0], p[1], p[2], 1.0};
  double c[4] = {0, 0, 0, 0};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) c[i] += e[i][j] * h[j];
  }
  return {static_cast<long>(std::floor(fx * c[0] / c[2] + cx)),
          static_cast<long>(std::floor(fy * c[1] / c[2] + cy)), c[2]};
}

/// Rodrigues rotation matrix of `angle` about unit `axis`.
inline Mat3 rodrigues(const Vec3& axis, double angle) {
  const Vec3 k = axis.normalized();
  Mat3 kx;
  kx << 0, -k.z(), k.y(), k.z(), 0, -k.x(), -k.y(), k.x(), 0;
  return Mat3::Identity() + std::sin(angle) * kx + (1.0 - std::cos(angle)) * kx * kx;
}

inline bool inside(const Primitive& prim, const Vec3& p, double margin) {
  if (const auto* s = std::get_if<Sphere>(&prim.shape)) {
    return (p - s->center).norm() < s->radius + margin;
  }
  if (const auto* b = std::get_if<Box>(&prim.shape)) {
    return (p.array() > b->min.array() - margin).all() &&
           (p.array() < b->max.array() + margin).all();
  }
  const auto& pl = std::get<Plane>(prim.shape);
  return pl.normal.dot(p) < pl.offset + margin;
}

/// A scene/camera/gripper triple whose depth-buffer view is unambiguous:
/// the marched ray is clearly visible up to 3 cm before its first surface
/// hit and clearly hidden for (N + 1) steps past it, with a 3 mm margin on
/// the depth comparison at each sample's pixel center.
struct OracleCase {
  Scene scene;
  CameraExtrinsics extr;
  CameraIntrinsics intr;
  Pose ee;
  Vec3 dir;
  Hit hit;
};

inline constexpr double kOracleMargin = 0.003;
inline constexpr double kOracleApproachBand = 0.03;

class OracleCaseGenerator {
 public:
  explicit OracleCaseGenerator(std::uint64_t seed, MarchConfig cfg = {})
      : rng_(seed), cfg_(cfg) {}

  OracleCase next() {
    for (;;) {
      ++attempts_;
      if (auto c = attempt()) return *c;
    }
  }

  std::size_t attempts() const { return attempts_; }

 private:
  double uni(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }

  Scene random_scene() {
    Scene s;
    s.primitives.push_back({Plane{Vec3::UnitZ(), 0.0}});
    const int boxes = static_cast<int>(uni(0.0, 3.0));
    for (int i = 0; i < boxes; ++i) {
      const Vec3 c(uni(-0.25, 0.25), uni(-0.25, 0.25), 0.0);
      const Vec3 half(uni(0.04, 0.1), uni(0.04, 0.1), 0.0);
      const double h = uni(0.05, 0.2);
      s.primitives.push_back({Box{Vec3(c.x() - half.x(), c.y() - half.y(), 0.0),
                                  Vec3(c.x() + half.x(), c.y() + half.y(), h)}});
    }
    if (uni(0.0, 1.0) < 0.6) {
      const double r = uni(0.05, 0.1);
      s.primitives.push_back(
          {Sphere{Vec3(uni(-0.25, 0.25), uni(-0.25, 0.25), r + uni(0.0, 0.1)), r}});
    }
    return s;
  }

  // Camera depth seen through the center of pixel (u, v), or nullopt.
  std::optional<double> center_depth(const OracleCase& c, long u, long v) const {
    const Mat3 r = c.extr.rotation();
    const Vec3 ray_cam((u + 0.5 - c.intr.cx) / c.intr.fx, (v + 0.5 - c.intr.cy) / c.intr.fy,
                       1.0);
    const Vec3 dir = (r.transpose() * ray_cam).normalized();
    const auto hit = analytic_intersection(c.scene, c.extr.center(), dir);
    if (!hit) return std::nullopt;
    return (r * hit->point + c.extr.translation()).z();
  }

  std::optional<OracleCase> attempt() {
    OracleCase c;
    c.scene = random_scene();

    c.intr.width = c.intr.height = 256;
    const double fov = uni(50.0, 70.0) * M_PI / 180.0;
    c.intr.fx = c.intr.fy = 128.0 / std::tan(0.5 * fov);
    c.intr.cx = c.intr.cy = 128.0;
    const double az = uni(0.0, 2.0 * M_PI);
    const double el = uni(45.0, 85.0) * M_PI / 180.0;
    const double dist = uni(0.8, 1.4);
    const Vec3 target(uni(-0.1, 0.1), uni(-0.1, 0.1), 0.05);
    const Vec3 eye = target + dist * Vec3(std::cos(el) * std::cos(az),
                                          std::cos(el) * std::sin(az), std::sin(el));
    c.extr = CameraExtrinsics::look_at(eye, target);

    const double tilt = uni(0.0, 25.0) * M_PI / 180.0;
    const double tilt_az = uni(0.0, 2.0 * M_PI);
    const Vec3 tilt_axis(std::cos(tilt_az), std::sin(tilt_az), 0.0);
    const Mat3 rot = rodrigues(tilt_axis, tilt) * rodrigues(Vec3::UnitX(), M_PI);
    c.ee.orientation = Quat(rot);
    c.ee.position = Vec3(uni(-0.25, 0.25), uni(-0.25, 0.25), uni(0.15, 0.6));
    c.dir = rot.col(2);

    for (const auto& p : c.scene.primitives) {
      if (inside(p, c.ee.position, 0.01)) return std::nullopt;
    }
    const auto hit = analytic_intersection(c.scene, c.ee.position, c.dir);
    const double window = (cfg_.tolerance + 1) * cfg_.step_delta;
    if (!hit || hit->distance < 0.05 || hit->distance + window > cfg_.max_length) {
      return std::nullopt;
    }
    if (-hit->normal.dot(c.dir) < 0.5) return std::nullopt;
    if (hit->normal.dot((eye - hit->point).normalized()) < 0.3) return std::nullopt;
    c.hit = *hit;

    const Mat4Rows e = rows_of(c.extr.matrix());
    const long n_check = static_cast<long>(
        std::floor((hit->distance + window) / cfg_.step_delta));
    for (long i = 0; i < n_check; ++i) {
      const double s = static_cast<double>(i + 1) * cfg_.step_delta;
      if (s > hit->distance - kOracleApproachBand && s <= hit->distance) continue;
      const Vec3 p = c.ee.position + s * c.dir;
      const OraclePixel px =
          oracle_project(e, c.intr.fx, c.intr.fy, c.intr.cx, c.intr.cy, {p.x(), p.y(), p.z()});
      const bool in_frame = px.z > 0 && px.u >= 0 && px.v >= 0 && px.u < c.intr.width &&
                            px.v < c.intr.height;
      if (s <= hit->distance) {
        // Must be clearly visible.
        if (!in_frame) return std::nullopt;
        const auto d = center_depth(c, px.u, px.v);
        if (d && !(px.z + cfg_.epsilon + kOracleMargin < *d)) return std::nullopt;
      } else {
        // Must be clearly hidden.
        if (!in_frame) continue;
        const auto d = center_depth(c, px.u, px.v);
        if (!d || !(*d <= px.z + cfg_.epsilon - kOracleMargin)) return std::nullopt;
      }
    }
    return c;
  }

  std::mt19937_64 rng_;
  MarchConfig cfg_;
  std::size_t attempts_ = 0;
};

// --- raster helpers -------------------------------------------------------------

inline double distance_to_segment(double px, double py, const Segment& s) {
  const double ax = s.a.u, ay = s.a.v, bx = s.b.u, by = s.b.v;
  const double dx = bx - ax, dy = by - ay;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0 ? ((px - ax) * dx + (py - ay) * dy) / len2 : 0.0;
  t = std::max(0.0, std::min(1.0, t));
  return std::hypot(px - (ax + t * dx), py - (ay + t * dy));
}

/// Euclidean distance from a pixel to the nearest primitive of the plan.
inline double distance_to_plan(int u, int v, const OverlayPlan& plan) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : plan.segments) best = std::min(best, distance_to_segment(u, v, s));
  for (const auto& d : plan.disks) {
    best = std::min(best, std::max(0.0, std::hypot(u - d.center.u, v - d.center.v) - d.radius));
  }
  for (const auto& r : plan.rings) {
    best = std::min(best, std::abs(std::hypot(u - r.center.u, v - r.center.v) - r.radius));
  }
  return best;
}

struct RgbLess {
  bool operator()(const Rgb& a, const Rgb& b) const {
    return std::tie(a.r, a.g, a.b) < std::tie(b.r, b.g, b.b);
  }
};

/// Colors of every pixel that differs between `before` and `after`.
inline std::set<Rgb, RgbLess> changed_colors(const RgbImage& before, const RgbImage& after) {
  std::set<Rgb, RgbLess> colors;
  for (int v = 0; v < before.height(); ++v) {
    for (int u = 0; u < before.width(); ++u) {
      if (!(before.at(u, v) == after.at(u, v))) colors.insert(after.at(u, v));
    }
  }
  return colors;
}

/// Per-pixel "differs from before" mask, row-major.
inline std::vector<bool> changed_mask(const RgbImage& before, const RgbImage& after) {
  std::vector<bool> mask(static_cast<std::size_t>(before.width() * before.height()));
  for (int v = 0; v < before.height(); ++v) {
    for (int u = 0; u < before.width(); ++u) {
      mask[static_cast<std::size_t>(v * before.width() + u)] =
          !(before.at(u, v) == after.at(u, v));
    }
  }
  return mask;
}

inline std::size_t count(const std::vector<bool>& mask) {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
}

}  // namespace aimbot::testing
