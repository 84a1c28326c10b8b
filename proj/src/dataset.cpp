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

#include "aimbot/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "aimbot/png_io.hpp"
#include "aimbot/visibility.hpp"

namespace aimbot {

namespace fs = std::filesystem;
using nlohmann::json;

Mat4 to_mat4(const Matrix16& m) {
  Mat4 out;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) out(r, c) = m[static_cast<std::size_t>(4 * r + c)];
  }
  return out;
}

Matrix16 to_matrix16(const Mat4& m) {
  Matrix16 out{};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) out[static_cast<std::size_t>(4 * r + c)] = m(r, c);
  }
  return out;
}

Pose FrameEntry::pose() const {
  Pose p;
  p.position = Vec3(pos[0], pos[1], pos[2]);
  p.orientation = Quat(quat[0], quat[1], quat[2], quat[3]);
  return p;
}

const CameraEntry* EpisodeManifest::find_camera(const std::string& id) const {
  for (const auto& c : cameras) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

// --- JSON ------------------------------------------------------------------------

namespace {

json intrinsics_json(const CameraIntrinsics& in) {
  return {{"fx", in.fx}, {"fy", in.fy}, {"cx", in.cx},
          {"cy", in.cy}, {"width", in.width}, {"height", in.height}};
}

CameraIntrinsics intrinsics_from(const json& j) {
  CameraIntrinsics in;
  in.fx = j.at("fx").get<double>();
  in.fy = j.at("fy").get<double>();
  in.cx = j.at("cx").get<double>();
  in.cy = j.at("cy").get<double>();
  in.width = j.at("width").get<int>();
  in.height = j.at("height").get<int>();
  return in;
}

json manifest_json(const EpisodeManifest& m) {
  json cams = json::array();
  for (const auto& c : m.cameras) {
    json jc = {{"id", c.id},
               {"role", std::string(to_string(c.role))},
               {"intrinsics", intrinsics_json(c.intrinsics)}};
    if (c.extrinsics) jc["extrinsics"] = *c.extrinsics;
    if (c.hand_eye) jc["hand_eye"] = *c.hand_eye;
    cams.push_back(std::move(jc));
  }
  json frames = json::array();
  for (const auto& f : m.frames) {
    json images = json::object();
    for (const auto& [id, p] : f.images) images[id] = {{"rgb", p.rgb}, {"depth", p.depth}};
    json jf = {{"images", std::move(images)},
               {"ee", {{"pos", f.pos}, {"quat", f.quat}}},
               {"gripper_open", f.gripper_open},
               {"t", f.t}};
    if (f.gripper_width) jf["gripper_width"] = *f.gripper_width;
    frames.push_back(std::move(jf));
  }
  return {{"version", m.version}, {"cameras", std::move(cams)}, {"frames", std::move(frames)}};
}

EpisodeManifest manifest_from(const json& j) {
  EpisodeManifest m;
  m.version = j.at("version").get<int>();
  for (const auto& jc : j.at("cameras")) {
    CameraEntry c;
    c.id = jc.at("id").get<std::string>();
    const auto role = parse_camera_role(jc.at("role").get<std::string>());
    if (!role) throw std::invalid_argument("camera '" + c.id + "': role must be fixed or wrist");
    c.role = *role;
    c.intrinsics = intrinsics_from(jc.at("intrinsics"));
    if (jc.contains("extrinsics")) c.extrinsics = jc.at("extrinsics").get<Matrix16>();
    if (jc.contains("hand_eye")) c.hand_eye = jc.at("hand_eye").get<Matrix16>();
    m.cameras.push_back(std::move(c));
  }
  for (const auto& jf : j.at("frames")) {
    FrameEntry f;
    for (const auto& [id, jp] : jf.at("images").items()) {
      f.images[id] = {jp.at("rgb").get<std::string>(), jp.at("depth").get<std::string>()};
    }
    f.pos = jf.at("ee").at("pos").get<std::array<double, 3>>();
    f.quat = jf.at("ee").at("quat").get<std::array<double, 4>>();
    f.gripper_open = jf.at("gripper_open").get<bool>();
    if (jf.contains("gripper_width") && !jf.at("gripper_width").is_null()) {
      f.gripper_width = jf.at("gripper_width").get<double>();
    }
    f.t = jf.at("t").get<double>();
    m.frames.push_back(std::move(f));
  }
  return m;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path, "cannot open for writing");
  out << text;
  out.close();
  if (!out) throw IoError(path, "write failed");
}

}  // namespace

std::string manifest_to_json(const EpisodeManifest& manifest) {
  return manifest_json(manifest).dump(2) + "\n";
}

EpisodeManifest manifest_from_json(const std::string& text, const fs::path& source) {
  try {
    return manifest_from(json::parse(text));
  } catch (const json::exception& e) {
    throw IoError(source, std::string("invalid manifest: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw IoError(source, std::string("invalid manifest: ") + e.what());
  }
}

EpisodeManifest read_manifest(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw IoError(path, "manifest not found");
  return manifest_from_json(read_text(path), path);
}

void write_manifest(const fs::path& path, const EpisodeManifest& manifest) {
  write_text(path, manifest_to_json(manifest));
}

// --- validation --------------------------------------------------------------------

namespace {

bool is_safe_relative(const std::string& p) {
  const fs::path path(p);
  if (p.empty() || path.is_absolute()) return false;
  for (const auto& part : path) {
    if (part == "..") return false;
  }
  return true;
}

std::string size_str(int w, int h) { return std::to_string(w) + "x" + std::to_string(h); }

enum class Checks { kSchema, kFiles, kImages };

std::vector<std::string> collect_violations(const EpisodeManifest& m, const fs::path& root,
                                            Checks depth) {
  std::vector<std::string> out;
  if (m.version != kManifestVersion) {
    out.push_back("unsupported manifest version " + std::to_string(m.version));
  }
  if (m.cameras.empty()) out.push_back("manifest declares no cameras");

  std::set<std::string> ids;
  for (const auto& c : m.cameras) {
    const std::string where = "camera '" + c.id + "': ";
    if (c.id.empty()) out.push_back("camera with empty id");
    if (!ids.insert(c.id).second) out.push_back(where + "duplicate id");
    try {
      c.intrinsics.validate();
    } catch (const ValidationError& e) {
      out.push_back(where + "intrinsics " + e.what());
    }
    if (c.role == CameraRole::kFixed) {
      if (!c.extrinsics) {
        out.push_back(where + "fixed camera needs extrinsics");
      } else if (auto why = rigidity_violation(to_mat4(*c.extrinsics)); !why.empty()) {
        out.push_back(where + "extrinsics not rigid: " + why);
      }
      if (c.hand_eye) out.push_back(where + "fixed camera must not carry hand_eye");
    } else {
      if (!c.hand_eye) {
        out.push_back(where + "wrist camera needs hand_eye");
      } else if (auto why = rigidity_violation(to_mat4(*c.hand_eye)); !why.empty()) {
        out.push_back(where + "hand_eye not rigid: " + why);
      }
      if (c.extrinsics) out.push_back(where + "wrist camera must not carry extrinsics");
    }
  }

  for (std::size_t i = 0; i < m.frames.size(); ++i) {
    const FrameEntry& f = m.frames[i];
    const std::string where = "frame " + std::to_string(i) + ": ";
    try {
      f.pose().validate();
    } catch (const ValidationError& e) {
      out.push_back(where + e.what());
    }
    if (f.gripper_width && !(*f.gripper_width >= 0.0)) {
      out.push_back(where + "gripper_width must be >= 0");
    }
    if (!std::isfinite(f.t)) out.push_back(where + "timestamp is not finite");
    for (const auto& [id, _] : f.images) {
      if (!m.find_camera(id)) out.push_back(where + "images for undeclared camera '" + id + "'");
    }
    for (const auto& c : m.cameras) {
      const auto it = f.images.find(c.id);
      const std::string cam = where + "camera '" + c.id + "': ";
      if (it == f.images.end()) {
        out.push_back(cam + "no images");
        continue;
      }
      const ImagePaths& p = it->second;
      bool paths_ok = true;
      for (const auto* rel : {&p.rgb, &p.depth}) {
        if (!is_safe_relative(*rel)) {
          out.push_back(cam + "path '" + *rel + "' must be relative to the episode");
          paths_ok = false;
        }
      }
      if (!paths_ok || depth == Checks::kSchema) continue;

      const fs::path rgb = root / p.rgb;
      const fs::path dep = root / p.depth;
      bool present = true;
      if (!fs::is_regular_file(rgb)) {
        out.push_back(cam + "missing rgb file " + rgb.string());
        present = false;
      }
      if (!fs::is_regular_file(dep)) {
        out.push_back(cam + "missing depth file " + dep.string());
        present = false;
      }
      if (!present || depth != Checks::kImages) continue;

      try {
        const PngInfo ri = read_png_info(rgb);
        const PngInfo di = read_png_info(dep);
        if (ri.width != di.width || ri.height != di.height) {
          out.push_back(cam + "rgb is " + size_str(ri.width, ri.height) + " but depth is " +
                        size_str(di.width, di.height));
        } else if (ri.width != c.intrinsics.width || ri.height != c.intrinsics.height) {
          out.push_back(cam + "images are " + size_str(ri.width, ri.height) +
                        " but intrinsics are " +
                        size_str(c.intrinsics.width, c.intrinsics.height));
        }
        if (di.bit_depth != 16 || di.channels != 1) {
          out.push_back(cam + "depth " + dep.string() + " is not a 16-bit single-channel PNG");
        }
      } catch (const IoError& e) {
        out.push_back(cam + e.what());
      }
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> find_violations(const EpisodeManifest& manifest, const fs::path& root,
                                         bool check_images) {
  return collect_violations(manifest, root, check_images ? Checks::kImages : Checks::kFiles);
}

// --- episodes ------------------------------------------------------------------------

Episode Episode::load(const fs::path& dir) {
  EpisodeManifest m = read_manifest(dir / kManifestName);
  const auto schema = collect_violations(m, dir, Checks::kSchema);
  if (!schema.empty()) {
    throw ValidationError((dir / kManifestName).string() + ": " + schema.front());
  }
  for (std::size_t i = 0; i < m.frames.size(); ++i) {
    for (const auto& c : m.cameras) {
      const ImagePaths& p = m.frames[i].images.at(c.id);
      for (const auto* rel : {&p.rgb, &p.depth}) {
        if (!fs::is_regular_file(dir / *rel)) {
          throw FrameError(i, dir / *rel, "referenced file does not exist");
        }
      }
    }
  }
  return Episode(dir, std::move(m));
}

FrameBundle Episode::frame(std::size_t i) const { return build(i, true); }

FrameBundle Episode::frame_lenient(std::size_t i) const { return build(i, false); }

FrameBundle Episode::build(std::size_t i, bool strict) const {
  if (i >= manifest_.frames.size()) {
    throw ValidationError("frame index " + std::to_string(i) + " out of range (episode has " +
                          std::to_string(manifest_.frames.size()) + " frames)");
  }
  const FrameEntry& entry = manifest_.frames[i];
  FrameBundle b;
  b.index = i;
  b.t = entry.t;
  b.gripper.pose = entry.pose();
  b.gripper.open = entry.gripper_open;
  b.gripper.width = entry.gripper_width;

  auto load = [&](const fs::path& path, auto reader) {
    try {
      return reader(path);
    } catch (const IoError& e) {
      throw FrameError(i, path, e.what());
    }
  };

  for (const auto& cam : manifest_.cameras) {
    const ImagePaths& p = entry.images.at(cam.id);
    CameraView view;
    view.id = cam.id;
    view.role = cam.role;
    view.intrinsics = cam.intrinsics;
    view.rgb = load(root_ / p.rgb, [](const fs::path& f) { return read_png_rgb(f); });
    view.depth = load(root_ / p.depth, [](const fs::path& f) { return read_png_depth(f); });
    b.views.push_back(std::move(view));
  }

  try {
    b.gripper.validate();
    for (std::size_t k = 0; k < b.views.size(); ++k) {
      CameraView& view = b.views[k];
      const CameraEntry& cam = manifest_.cameras[k];
      if (view.rgb.width() != view.depth.width() || view.rgb.height() != view.depth.height()) {
        throw ValidationError("camera '" + cam.id + "': rgb is " +
                              size_str(view.rgb.width(), view.rgb.height()) +
                              " but depth is " +
                              size_str(view.depth.width(), view.depth.height()));
      }
      try {
        require_matching_size(view.depth, view.intrinsics);
      } catch (const ValidationError& e) {
        throw ValidationError("camera '" + cam.id + "': " + e.what());
      }
      view.extrinsics = cam.role == CameraRole::kWrist
                            ? compute_wrist_extrinsics(b.gripper.pose, to_mat4(*cam.hand_eye))
                            : CameraExtrinsics::from_matrix(to_mat4(*cam.extrinsics));
    }
  } catch (const ValidationError& e) {
    const std::string msg = "frame " + std::to_string(i) + ": " + e.what();
    if (strict) throw ValidationError(msg);
    b.error = msg;
  }
  return b;
}

// --- augmentation ---------------------------------------------------------------------

void augment_frame(const FrameBundle& frame, const MarchConfig& cfg, const RenderStyle& style,
                   FrameAugmentation& out) {
  out.views.resize(frame.views.size());
  out.error.reset();
  out.render_seconds = 0.0;
  auto pass_through = [&] {
    for (std::size_t k = 0; k < frame.views.size(); ++k) {
      out.views[k].image = frame.views[k].rgb;
      out.views[k].early_return = false;
      out.views[k].render_seconds = 0.0;
    }
  };
  if (frame.error) {
    pass_through();
    out.error = frame.error;
    return;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    bool grasp = false;
    if (style.variant == StyleVariant::kGraspSense) {
      for (const auto& v : frame.views) {
        if (v.role == CameraRole::kWrist) {
          grasp = grasp_sense(v.depth, v.extrinsics, v.intrinsics, frame.gripper,
                              style.grasp_threshold);
          break;
        }
      }
    }
    for (std::size_t k = 0; k < frame.views.size(); ++k) {
      const auto view_start = std::chrono::steady_clock::now();
      const CameraView& v = frame.views[k];
      if (v.rgb.width() != v.depth.width() || v.rgb.height() != v.depth.height()) {
        throw ValidationError("camera '" + v.id + "': rgb and depth sizes differ");
      }
      const RenderStyle vs = style.scaled_to_height(v.rgb.height());
      const GripperState g = randomize_cue(frame.gripper, vs, frame.index, v.id);
      const OverlayPlan plan =
          v.role == CameraRole::kWrist
              ? plan_wrist(v.depth, v.extrinsics, v.intrinsics, g, cfg, vs, grasp)
              : plan_fixed(v.depth, v.extrinsics, v.intrinsics, g, cfg, vs, grasp);
      ViewOutput& o = out.views[k];
      o.image = v.rgb;  // reuses the buffer when the size is unchanged
      rasterize(plan, o.image);
      o.early_return = plan.early_return;
      o.render_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - view_start).count();
    }
  } catch (const ValidationError& e) {
    pass_through();
    out.error = "frame " + std::to_string(frame.index) + ": " + e.what();
  }
  out.render_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

FrameAugmentation augment_frame(const FrameBundle& frame, const MarchConfig& cfg,
                                const RenderStyle& style) {
  FrameAugmentation out;
  augment_frame(frame, cfg, style, out);
  return out;
}

AugmentSummary augment_episode(const Episode& episode, const MarchConfig& cfg,
                               const RenderStyle& style, const fs::path& out_dir, int jobs) {
  cfg.validate();
  style.validate();
  const auto wall_start = std::chrono::steady_clock::now();

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError(out_dir, "cannot create output directory: " + ec.message());
  if (fs::equivalent(out_dir, episode.root(), ec)) {
    throw ValidationError("output directory must differ from the input episode");
  }

  const EpisodeManifest& m = episode.manifest();
  std::set<fs::path> dirs;
  for (const auto& f : m.frames) {
    for (const auto& [_, p] : f.images) {
      dirs.insert((out_dir / p.rgb).parent_path());
      dirs.insert((out_dir / p.depth).parent_path());
    }
  }
  for (const auto& d : dirs) {
    fs::create_directories(d, ec);
    if (ec) throw IoError(d, "cannot create directory: " + ec.message());
  }

  const std::size_t n = episode.frame_count();
  std::vector<FrameAugmentation> results(n);
  std::vector<std::exception_ptr> failures(n);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    FrameAugmentation aug;  // per-thread output buffers
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        const FrameBundle bundle = episode.frame_lenient(i);
        augment_frame(bundle, cfg, style, aug);
        const FrameEntry& entry = m.frames[i];
        for (std::size_t k = 0; k < bundle.views.size(); ++k) {
          const ImagePaths& p = entry.images.at(bundle.views[k].id);
          write_png_rgb(out_dir / p.rgb, aug.views[k].image);
          fs::copy_file(episode.root() / p.depth, out_dir / p.depth,
                        fs::copy_options::overwrite_existing);
        }
        FrameAugmentation& r = results[i];
        r.error = aug.error;
        r.render_seconds = aug.render_seconds;
        r.views.resize(aug.views.size());
        for (std::size_t k = 0; k < aug.views.size(); ++k) {
          r.views[k].early_return = aug.views[k].early_return;
          r.views[k].render_seconds = aug.views[k].render_seconds;
        }
      } catch (const fs::filesystem_error& e) {
        failures[i] = std::make_exception_ptr(IoError(e.path1(), e.code().message()));
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };

  const int workers = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(n, 1)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  write_manifest(out_dir / kManifestName, m);

  AugmentSummary s;
  s.frames = n;
  for (const auto& c : m.cameras) s.early_returns[c.id] = 0;
  for (std::size_t i = 0; i < n; ++i) {
    s.frame_render_seconds.push_back(results[i].render_seconds);
    s.images_written += m.cameras.size();
    if (results[i].error) s.errors.push_back({i, *results[i].error});
    for (std::size_t k = 0; k < results[i].views.size(); ++k) {
      if (results[i].views[k].early_return) ++s.early_returns[m.cameras[k].id];
    }
  }
  s.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return s;
}

}  // namespace aimbot
