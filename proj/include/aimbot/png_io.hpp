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
#include <filesystem>
#include <vector>

#include "aimbot/image.hpp"

namespace aimbot {

struct PngInfo {
  int width = 0;
  int height = 0;
  int bit_depth = 0;
  int channels = 0;
};

/// Header only. Throws IoError.
PngInfo read_png_info(const std::filesystem::path& path);

/// Any 8/16-bit gray, palette, RGB or RGBA PNG, converted to 8-bit RGB.
RgbImage read_png_rgb(const std::filesystem::path& path);
void write_png_rgb(const std::filesystem::path& path, const RgbImage& image);

/// 16-bit single-channel PNG holding millimeters; 0 means no measurement.
DepthImage read_png_depth(const std::filesystem::path& path);
/// Meters are rounded to the nearest millimeter and saturate at 65535;
/// invalid depths are stored as 0.
void write_png_depth(const std::filesystem::path& path, const DepthImage& depth);

std::uint16_t depth_to_millimeters(double meters);
inline double millimeters_to_depth(std::uint16_t mm) { return mm / 1000.0; }

}  // namespace aimbot
