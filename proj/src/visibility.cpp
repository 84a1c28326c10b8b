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

#include "aimbot/visibility.hpp"

#include <string>

#include "aimbot/error.hpp"

namespace aimbot {

bool check_visibility(const PixelProjection& proj, const DepthImage& depth,
                      double epsilon) {
  if (!(proj.z > 0.0)) return false;
  if (proj.u < 0 || proj.u >= depth.width() || proj.v < 0 ||
      proj.v >= depth.height()) {
    return false;
  }
  const double observed = depth.at(proj.u, proj.v);
  if (!DepthImage::is_valid_depth(observed)) return true;
  return proj.z + epsilon < observed;
}

void require_matching_size(const DepthImage& depth, const CameraIntrinsics& intr) {
  if (depth.width() != intr.width || depth.height() != intr.height) {
    throw ValidationError("depth image is " + std::to_string(depth.width()) + "x" +
                          std::to_string(depth.height()) + " but intrinsics are " +
                          std::to_string(intr.width) + "x" +
                          std::to_string(intr.height));
  }
}

}  // namespace aimbot
