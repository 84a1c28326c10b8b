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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace aimbot {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  bool operator==(const Rgb&) const = default;
};

/// Row-major 8-bit RGB raster.
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(int width, int height, Rgb fill = {});

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return pixels_.empty(); }
  bool contains(int u, int v) const {
    return u >= 0 && v >= 0 && u < width_ && v < height_;
  }

  Rgb at(int u, int v) const {
    const std::size_t i = index(u, v);
    return {pixels_[i], pixels_[i + 1], pixels_[i + 2]};
  }
  void set(int u, int v, Rgb c) {
    const std::size_t i = index(u, v);
    pixels_[i] = c.r;
    pixels_[i + 1] = c.g;
    pixels_[i + 2] = c.b;
  }

  /// Interleaved RGB bytes, 3 * width * height.
  const std::vector<std::uint8_t>& bytes() const { return pixels_; }
  std::vector<std::uint8_t>& bytes() { return pixels_; }

  bool operator==(const RgbImage&) const = default;

 private:
  std::size_t index(int u, int v) const {
    return 3 * (static_cast<std::size_t>(v) * static_cast<std::size_t>(width_) +
                static_cast<std::size_t>(u));
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Row-major metric depth (meters, camera-frame z). Zero or non-finite
/// values mark pixels without a measurement.
class DepthImage {
 public:
  DepthImage() = default;
  DepthImage(int width, int height, double fill = 0.0);

  int width() const { return width_; }
  int height() const { return height_; }

  double at(int u, int v) const { return values_[offset(u, v)]; }
  void set(int u, int v, double depth) { values_[offset(u, v)] = depth; }
  bool valid_at(int u, int v) const { return is_valid_depth(at(u, v)); }

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  static bool is_valid_depth(double d) { return std::isfinite(d) && d > 0.0; }

  bool operator==(const DepthImage&) const = default;

 private:
  std::size_t offset(int u, int v) const {
    return static_cast<std::size_t>(v) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(u);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

}  // namespace aimbot
