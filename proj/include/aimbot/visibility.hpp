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

#include "aimbot/geometry.hpp"
#include "aimbot/image.hpp"

namespace aimbot {

inline constexpr double kDefaultVisibilityEpsilon = 0.01;  // meters

/// Depth-buffer occlusion test. A projection is visible when it is in front
/// of the camera, inside the image, and either the observed depth at its
/// pixel is missing or z + epsilon < D[v, u]. Missing depth counts as no
/// occlusion evidence.
bool check_visibility(const PixelProjection& proj, const DepthImage& depth,
                      double epsilon = kDefaultVisibilityEpsilon);

/// Throws ValidationError unless the depth raster matches the intrinsics.
void require_matching_size(const DepthImage& depth, const CameraIntrinsics& intr);

}  // namespace aimbot
