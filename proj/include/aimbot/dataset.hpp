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

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aimbot/error.hpp"
#include "aimbot/geometry.hpp"
#include "aimbot/image.hpp"
#include "aimbot/overlay.hpp"
#include "aimbot/raymarch.hpp"
#include "aimbot/synthscene.hpp"

namespace aimbot {

inline constexpr int kManifestVersion = 1;
inline constexpr const char* kManifestName = "manifest.json";
inline constexpr const char* kGroundTruthName = "ground_truth.json";

using Matrix16 = std::array<double, 16>;  // row-major 4x4

Mat4 to_mat4(const Matrix16& m);
Matrix16 to_matrix16(const Mat4& m);

// --- manifest.json ---------------------------------------------------------
//
// {
//   "version": 1,
//   "cameras": [
//     {"id": "front", "role": "fixed",
//      "intrinsics": {"fx":..,"fy":..,"cx":..,"cy":..,"width":..,"height":..},
//      "extrinsics": [16 row-major floats, world -> camera]},
//     {"id": "wrist", "role": "wrist", "intrinsics": {...},
//      "hand_eye": [16 row-major floats, camera pose in gripper frame]}
//   ],
//   "frames": [
//     {"images": {"front": {"rgb": "front/rgb_0000.png", "depth": "..."}, ...},
//      "ee": {"pos": [x, y, z], "quat": [w, x, y, z]},
//      "gripper_open": true, "gripper_width": 0.08, "t": 0.0}
//   ]
// }
//
// Paths are relative to the episode directory. Depth PNGs are 16-bit
// millimeters of camera-frame z, 0 = no measurement.

struct CameraEntry {
  std::string id;
  CameraRole role = CameraRole::kFixed;
  CameraIntrinsics intrinsics;
  std::optional<Matrix16> extrinsics;
  std::optional<Matrix16> hand_eye;

  bool operator==(const CameraEntry&) const = default;
};

struct ImagePaths {
  std::string rgb;
  std::string depth;

  bool operator==(const ImagePaths&) const = default;
};

struct FrameEntry {
  std::map<std::string, ImagePaths> images;
  std::array<double, 3> pos{};
  std::array<double, 4> quat{1.0, 0.0, 0.0, 0.0};  // w, x, y, z
  bool gripper_open = true;
  std::optional<double> gripper_width;
  double t = 0.0;

  Pose pose() const;
  bool operator==(const FrameEntry&) const = default;
};

struct EpisodeManifest {
  int version = kManifestVersion;
  std::vector<CameraEntry> cameras;
  std::vector<FrameEntry> frames;

  const CameraEntry* find_camera(const std::string& id) const;
  bool operator==(const EpisodeManifest&) const = default;
};

/// Throws IoError naming `path` when the file is missing or not a valid
/// manifest document. Performs schema checks only, not file or geometry
/// checks.
EpisodeManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const EpisodeManifest& manifest);
std::string manifest_to_json(const EpisodeManifest& manifest);
EpisodeManifest manifest_from_json(const std::string& text,
                                   const std::filesystem::path& source = "<memory>");

/// Every invariant violation found in the manifest and the files it
/// references under `root`: file presence, image sizes, rigidity,
/// quaternion norms, camera coverage. Empty when clean.
std::vector<std::string> find_violations(const EpisodeManifest& manifest,
                                         const std::filesystem::path& root,
                                         bool check_images = true);

/// Error raised while materializing one frame.
class FrameError : public IoError {
 public:
  FrameError(std::size_t frame, const std::filesystem::path& path, const std::string& what)
      : IoError(path, "frame " + std::to_string(frame) + ": " + what), frame_(frame) {}
  std::size_t frame() const noexcept { return frame_; }

 private:
  std::size_t frame_;
};

struct CameraView {
  std::string id;
  CameraRole role = CameraRole::kFixed;
  CameraIntrinsics intrinsics;
  CameraExtrinsics extrinsics;  // resolved; wrist cameras follow the EE pose
  RgbImage rgb;
  DepthImage depth;
};

struct FrameBundle {
  std::size_t index = 0;
  double t = 0.0;
  GripperState gripper;
  std::vector<CameraView> views;  // manifest camera order
  /// Set when geometry could not be resolved (bad pose, mismatched sizes).
  /// Views still carry the decoded images.
  std::optional<std::string> error;
};

class Episode {
 public:
  /// Reads `dir/manifest.json` and checks that every referenced file exists,
  /// every frame covers every camera and all transforms are rigid.
  static Episode load(const std::filesystem::path& dir);

  const std::filesystem::path& root() const { return root_; }
  const EpisodeManifest& manifest() const { return manifest_; }
  std::size_t frame_count() const { return manifest_.frames.size(); }

  /// Decodes frame `i`. Throws FrameError for unreadable files and
  /// ValidationError for dimension or geometry problems.
  FrameBundle frame(std::size_t i) const;
  /// Like frame(), but geometry problems are reported in FrameBundle::error
  /// instead of thrown. I/O failures still throw.
  FrameBundle frame_lenient(std::size_t i) const;

  class Iterator {
   public:
    using value_type = FrameBundle;
    using difference_type = std::ptrdiff_t;

    Iterator() = default;
    Iterator(const Episode* ep, std::size_t i) : ep_(ep), i_(i) {}
    FrameBundle operator*() const { return ep_->frame(i_); }
    Iterator& operator++() {
      ++i_;
      return *this;
    }
    Iterator operator++(int) {
      Iterator old = *this;
      ++i_;
      return old;
    }
    bool operator==(const Iterator& o) const { return i_ == o.i_; }

   private:
    const Episode* ep_ = nullptr;
    std::size_t i_ = 0;
  };

  /// Frames are decoded on dereference.
  Iterator begin() const { return {this, 0}; }
  Iterator end() const { return {this, frame_count()}; }

 private:
  Episode(std::filesystem::path root, EpisodeManifest manifest)
      : root_(std::move(root)), manifest_(std::move(manifest)) {}
  FrameBundle build(std::size_t i, bool strict) const;

  std::filesystem::path root_;
  EpisodeManifest manifest_;
};

inline Episode load_episode(const std::filesystem::path& dir) { return Episode::load(dir); }

// --- augmentation ------------------------------------------------------------

struct ViewOutput {
  RgbImage image;
  bool early_return = false;
  double render_seconds = 0.0;
};

struct FrameAugmentation {
  std::vector<ViewOutput> views;  // same order as FrameBundle::views
  std::optional<std::string> error;
  double render_seconds = 0.0;
};

/// Renders every view of one frame: fixed cameras get shooting lines, wrist
/// cameras reticles. Style pixel sizes are taken as 256-row values and
/// rescaled to each view's height. Geometry errors are reported and the
/// input images are passed through. Grasp sense uses the first wrist camera
/// of the frame.
FrameAugmentation augment_frame(const FrameBundle& frame, const MarchConfig& cfg,
                                const RenderStyle& style);
/// Same, writing into `out` and reusing its image buffers.
void augment_frame(const FrameBundle& frame, const MarchConfig& cfg, const RenderStyle& style,
                   FrameAugmentation& out);

struct FrameIssue {
  std::size_t frame = 0;
  std::string message;
};

struct AugmentSummary {
  std::size_t frames = 0;
  std::size_t images_written = 0;
  std::map<std::string, std::size_t> early_returns;  // per camera id
  std::vector<FrameIssue> errors;
  std::vector<double> frame_render_seconds;
  double wall_seconds = 0.0;
};

/// Augments every frame into `out_dir`, mirroring the input layout: RGB
/// files are replaced by augmented ones, depth files are copied and the
/// manifest is rewritten there. `jobs` worker threads; output bytes do not
/// depend on it. Throws IoError on I/O failure.
AugmentSummary augment_episode(const Episode& episode, const MarchConfig& cfg,
                               const RenderStyle& style,
                               const std::filesystem::path& out_dir, int jobs = 1);

// --- synthetic episodes -----------------------------------------------------------

struct GroundTruthRecord {
  std::size_t frame = 0;
  std::string camera;
  bool hit = false;
  double distance = 0.0;  // capped at the march length when nothing is hit
  Vec3 point = Vec3::Zero();
  int u = 0;
  int v = 0;
};

struct SynthOptions {
  int frames = 20;
  double max_length = 2.0;
};

/// Renders the described scene along the trajectory and writes a complete
/// episode (RGB, depth, manifest) plus ground_truth.json with the analytic
/// stop point of every frame/camera. Returns the ground truth records.
std::vector<GroundTruthRecord> write_synthetic_episode(const SceneDescription& desc,
                                                       const Trajectory& trajectory,
                                                       const SynthOptions& options,
                                                       const std::filesystem::path& out_dir);

std::vector<GroundTruthRecord> read_ground_truth(const std::filesystem::path& path);

}  // namespace aimbot
