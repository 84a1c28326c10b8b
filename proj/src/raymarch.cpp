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

#include "aimbot/raymarch.hpp"

#include <algorithm>
#include <cmath>

#include "aimbot/error.hpp"

namespace aimbot {

void MarchConfig::validate() const {
  if (!(std::isfinite(step_delta) && step_delta > 0.0)) {
    throw ValidationError("step delta must be positive");
  }
  if (tolerance < 0) throw ValidationError("tolerance must be non-negative");
  if (!(std::isfinite(max_length) && max_length > 0.0)) {
    throw ValidationError("max length must be positive");
  }
  if (!(std::isfinite(epsilon) && epsilon > 0.0)) {
    throw ValidationError("epsilon must be positive");
  }
}

RayMarchResult find_stop_point(const Pose& ee_pose, const CameraExtrinsics& extr,
                               const CameraIntrinsics& intr,
                               const DepthImage& depth, const MarchConfig& cfg) {
  cfg.validate();
  ee_pose.validate();
  require_matching_size(depth, intr);

  const Vec3 origin = ee_pose.position;
  const Vec3 dir = quat_to_direction(ee_pose.orientation);

  RayMarchResult out;
  out.origin = world_to_image(origin, extr, intr);

  // Sample i sits at (i + 1) * delta; the slack absorbs the rounding in
  // max_length / delta so that an exact multiple reaches the cap.
  const auto max_steps = static_cast<long>(
      std::floor(cfg.max_length / cfg.step_delta * (1.0 + 1e-12)));
  out.points3d.reserve(static_cast<std::size_t>(std::min(max_steps, 4096L)));
  out.points2d.reserve(out.points3d.capacity());
  out.visibility.reserve(out.points3d.capacity());

  int invisible_run = 0;
  for (long i = 0; i < max_steps; ++i) {
    const double s = static_cast<double>(i + 1) * cfg.step_delta;
    const Vec3 p = origin + s * dir;
    const PixelProjection proj = world_to_image(p, extr, intr);
    const bool vis = check_visibility(proj, depth, cfg.epsilon);
    if (vis) {
      invisible_run = 0;
      out.stop_index = static_cast<int>(i);
    } else {
      if (invisible_run >= cfg.tolerance) break;
      ++invisible_run;
    }
    out.points3d.push_back(p);
    out.points2d.push_back({proj.u, proj.v});
    out.visibility.push_back(vis);
  }

  if (out.stop_index >= 0) {
    const auto k = static_cast<std::size_t>(out.stop_index);
    out.stop_point = out.points3d[k];
    out.stop_pixel = out.points2d[k];
    out.projection_distance = static_cast<double>(k + 1) * cfg.step_delta;
  } else {
    out.stop_point = origin;
    out.stop_pixel = {out.origin.u, out.origin.v};
    out.projection_distance = 0.0;
  }
  return out;
}

}  // namespace aimbot
