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

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "aimbot/dataset.hpp"
#include "aimbot/png_io.hpp"

namespace aimbot {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string frame_file(const std::string& camera, const char* kind, int frame) {
  char name[64];
  std::snprintf(name, sizeof(name), "%s_%04d.png", kind, frame);
  return camera + "/" + name;
}

}  // namespace

std::vector<GroundTruthRecord> write_synthetic_episode(const SceneDescription& desc,
                                                       const Trajectory& trajectory,
                                                       const SynthOptions& options,
                                                       const fs::path& out_dir) {
  desc.scene.validate();
  if (desc.cameras.empty()) throw ValidationError("scene description declares no cameras");
  if (!(options.max_length > 0.0)) throw ValidationError("max length must be positive");
  const auto samples = trajectory.sample(options.frames);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError(out_dir, "cannot create output directory: " + ec.message());
  for (const auto& cam : desc.cameras) {
    fs::create_directories(out_dir / cam.id, ec);
    if (ec) throw IoError(out_dir / cam.id, "cannot create directory: " + ec.message());
  }

  EpisodeManifest manifest;
  for (const auto& cam : desc.cameras) {
    CameraEntry e;
    e.id = cam.id;
    e.role = cam.role;
    e.intrinsics = cam.intrinsics;
    if (cam.role == CameraRole::kFixed) {
      e.extrinsics = to_matrix16(cam.extrinsics);
    } else {
      e.hand_eye = to_matrix16(cam.hand_eye);
    }
    manifest.cameras.push_back(std::move(e));
  }

  std::vector<GroundTruthRecord> truth;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const TrajectorySample& s = samples[k];
    const int frame = static_cast<int>(k);
    FrameEntry entry;
    entry.pos = {s.pose.position.x(), s.pose.position.y(), s.pose.position.z()};
    entry.quat = {s.pose.orientation.w(), s.pose.orientation.x(), s.pose.orientation.y(),
                  s.pose.orientation.z()};
    entry.gripper_open = s.open;
    entry.gripper_width = s.width;
    entry.t = s.t;

    const Vec3 dir = quat_to_direction(s.pose.orientation);
    const auto hit = analytic_intersection(desc.scene, s.pose.position, dir);
    const bool within = hit && hit->distance <= options.max_length;
    const double distance = within ? hit->distance : options.max_length;
    const Vec3 point = within ? hit->point : Vec3(s.pose.position + options.max_length * dir);

    for (const auto& cam : desc.cameras) {
      const CameraExtrinsics extr = cam.role == CameraRole::kWrist
                                        ? compute_wrist_extrinsics(s.pose, cam.hand_eye)
                                        : CameraExtrinsics::from_matrix(cam.extrinsics);
      ImagePaths paths{frame_file(cam.id, "rgb", frame), frame_file(cam.id, "depth", frame)};
      write_png_rgb(out_dir / paths.rgb, shade_scene(desc.scene, extr, cam.intrinsics));
      write_png_depth(out_dir / paths.depth, ray_cast_depth(desc.scene, extr, cam.intrinsics));
      entry.images[cam.id] = paths;

      const PixelProjection px = world_to_image(point, extr, cam.intrinsics);
      truth.push_back({k, cam.id, within, distance, point, px.u, px.v});
    }
    manifest.frames.push_back(std::move(entry));
  }
  write_manifest(out_dir / kManifestName, manifest);

  json records = json::array();
  for (const auto& r : truth) {
    records.push_back({{"frame", r.frame},
                       {"camera", r.camera},
                       {"hit", r.hit},
                       {"distance", r.distance},
                       {"point", {r.point.x(), r.point.y(), r.point.z()}},
                       {"pixel", {r.u, r.v}}});
  }
  const json doc = {{"max_length", options.max_length}, {"records", std::move(records)}};
  const fs::path gt = out_dir / kGroundTruthName;
  std::ofstream out(gt, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(gt, "cannot open for writing");
  out << doc.dump(2) << "\n";
  if (!out) throw IoError(gt, "write failed");
  return truth;
}

std::vector<GroundTruthRecord> read_ground_truth(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open");
  try {
    const json doc = json::parse(in);
    std::vector<GroundTruthRecord> out;
    for (const auto& j : doc.at("records")) {
      GroundTruthRecord r;
      r.frame = j.at("frame").get<std::size_t>();
      r.camera = j.at("camera").get<std::string>();
      r.hit = j.at("hit").get<bool>();
      r.distance = j.at("distance").get<double>();
      const auto p = j.at("point").get<std::array<double, 3>>();
      r.point = Vec3(p[0], p[1], p[2]);
      const auto px = j.at("pixel").get<std::array<int, 2>>();
      r.u = px[0];
      r.v = px[1];
      out.push_back(std::move(r));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path, std::string("invalid ground truth: ") + e.what());
  }
}

}  // namespace aimbot
