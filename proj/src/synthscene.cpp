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

#include "aimbot/synthscene.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "aimbot/error.hpp"

namespace aimbot {

namespace {

constexpr double kMinHitDistance = 1e-12;

std::optional<Hit> intersect(const Plane& plane, const Vec3& o, const Vec3& d) {
  const double denom = plane.normal.dot(d);
  if (std::abs(denom) < 1e-15) return std::nullopt;
  const double t = (plane.offset - plane.normal.dot(o)) / denom;
  if (!(t > kMinHitDistance)) return std::nullopt;
  return Hit{o + t * d, t, plane.normal, 0};
}

std::optional<Hit> intersect(const Sphere& s, const Vec3& o, const Vec3& d) {
  const Vec3 oc = o - s.center;
  const double b = oc.dot(d);
  const double c = oc.squaredNorm() - s.radius * s.radius;
  const double disc = b * b - c;
  if (disc < 0.0) return std::nullopt;
  const double root = std::sqrt(disc);
  // Numerically stable pair of roots of t^2 + 2bt + c = 0.
  const double q = b > 0.0 ? -b - root : -b + root;
  double t0 = q;
  double t1 = q != 0.0 ? c / q : 0.0;
  if (t0 > t1) std::swap(t0, t1);
  const double t = t0 > kMinHitDistance ? t0 : t1;
  if (!(t > kMinHitDistance)) return std::nullopt;
  const Vec3 p = o + t * d;
  return Hit{p, t, (p - s.center).normalized(), 0};
}

std::optional<Hit> intersect(const Box& box, const Vec3& o, const Vec3& d) {
  double t_near = -std::numeric_limits<double>::infinity();
  double t_far = std::numeric_limits<double>::infinity();
  int near_axis = -1;
  int far_axis = -1;
  for (int a = 0; a < 3; ++a) {
    if (d[a] == 0.0) {
      if (o[a] < box.min[a] || o[a] > box.max[a]) return std::nullopt;
      continue;
    }
    double t0 = (box.min[a] - o[a]) / d[a];
    double t1 = (box.max[a] - o[a]) / d[a];
    if (t0 > t1) std::swap(t0, t1);
    if (t0 > t_near) {
      t_near = t0;
      near_axis = a;
    }
    if (t1 < t_far) {
      t_far = t1;
      far_axis = a;
    }
    if (t_near > t_far) return std::nullopt;
  }
  double t = t_near;
  int axis = near_axis;
  double sign = -1.0;  // entering: normal opposes the ray
  if (!(t > kMinHitDistance)) {
    t = t_far;
    axis = far_axis;
    sign = 1.0;
  }
  if (!(t > kMinHitDistance) || axis < 0) return std::nullopt;
  Vec3 n = Vec3::Zero();
  n[axis] = d[axis] > 0.0 ? sign : -sign;
  return Hit{o + t * d, t, n, 0};
}

}  // namespace

void Scene::validate() const {
  for (std::size_t i = 0; i < primitives.size(); ++i) {
    const std::string where = "primitive " + std::to_string(i) + ": ";
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Plane>) {
            if (std::abs(s.normal.norm() - 1.0) > 1e-9) {
              throw ValidationError(where + "plane normal must be unit length");
            }
          } else if constexpr (std::is_same_v<T, Sphere>) {
            if (!(s.radius > 0.0)) throw ValidationError(where + "sphere radius must be > 0");
          } else {
            if (!(s.min.array() < s.max.array()).all()) {
              throw ValidationError(where + "box min must be < max on every axis");
            }
          }
        },
        primitives[i].shape);
  }
}

std::optional<Hit> analytic_intersection(const Scene& scene, const Vec3& origin,
                                         const Vec3& dir) {
  std::optional<Hit> best;
  for (std::size_t i = 0; i < scene.primitives.size(); ++i) {
    auto hit = std::visit([&](const auto& s) { return intersect(s, origin, dir); },
                          scene.primitives[i].shape);
    if (hit && (!best || hit->distance < best->distance)) {
      hit->primitive = i;
      best = hit;
    }
  }
  return best;
}

Vec3 pixel_ray(int u, int v, const CameraExtrinsics& extr,
               const CameraIntrinsics& intr) {
  const Vec3 cam((u + 0.5 - intr.cx) / intr.fx, (v + 0.5 - intr.cy) / intr.fy, 1.0);
  return (extr.rotation().transpose() * cam).normalized();
}

DepthImage ray_cast_depth(const Scene& scene, const CameraExtrinsics& extr,
                          const CameraIntrinsics& intr) {
  intr.validate();
  DepthImage depth(intr.width, intr.height, 0.0);
  const Vec3 eye = extr.center();
  const Mat3 r = extr.rotation();
  const Vec3 t = extr.translation();
  for (int v = 0; v < intr.height; ++v) {
    for (int u = 0; u < intr.width; ++u) {
      if (auto hit = analytic_intersection(scene, eye, pixel_ray(u, v, extr, intr))) {
        depth.set(u, v, (r * hit->point + t).z());
      }
    }
  }
  return depth;
}

RgbImage shade_scene(const Scene& scene, const CameraExtrinsics& extr,
                     const CameraIntrinsics& intr) {
  intr.validate();
  RgbImage img(intr.width, intr.height, Rgb{32, 32, 40});
  const Vec3 eye = extr.center();
  const Vec3 light = Vec3(0.3, 0.2, 1.0).normalized();
  for (int v = 0; v < intr.height; ++v) {
    for (int u = 0; u < intr.width; ++u) {
      const Vec3 dir = pixel_ray(u, v, extr, intr);
      const auto hit = analytic_intersection(scene, eye, dir);
      if (!hit) continue;
      Vec3 n = hit->normal;
      if (n.dot(dir) > 0.0) n = -n;
      const double k = 0.3 + 0.7 * std::max(0.0, n.dot(light));
      const Rgb c = scene.primitives[hit->primitive].color;
      auto shade = [k](std::uint8_t ch) {
        return static_cast<std::uint8_t>(std::clamp(std::lround(ch * k), 0L, 255L));
      };
      img.set(u, v, {shade(c.r), shade(c.g), shade(c.b)});
    }
  }
  return img;
}

std::string_view to_string(CameraRole role) {
  return role == CameraRole::kWrist ? "wrist" : "fixed";
}

std::optional<CameraRole> parse_camera_role(std::string_view name) {
  if (name == "fixed") return CameraRole::kFixed;
  if (name == "wrist") return CameraRole::kWrist;
  return std::nullopt;
}

// --- description parsing ----------------------------------------------------

namespace {

class Record {
 public:
  Record(std::string source, int line, std::string kind)
      : source_(std::move(source)), line_(line), kind_(std::move(kind)) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw SchemaError(source_ + ":" + std::to_string(line_) + ": " + msg);
  }

  const std::string& kind() const { return kind_; }

  void add(const std::string& token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) fail("expected key=value, got '" + token + "'");
    const std::string key = token.substr(0, eq);
    if (values_.count(key)) fail("duplicate key '" + key + "'");
    values_[key] = token.substr(eq + 1);
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  const std::string& raw(const std::string& key) {
    auto it = values_.find(key);
    if (it == values_.end()) fail(kind_ + ": missing key '" + key + "'");
    used_.insert(key);
    return it->second;
  }

  std::vector<double> numbers(const std::string& key, std::size_t count) {
    const std::string& text = raw(key);
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto comma = std::min(text.find(',', pos), text.size());
      double value = 0.0;
      const char* first = text.data() + pos;
      const char* last = text.data() + comma;
      const auto res = std::from_chars(first, last, value);
      if (res.ec != std::errc() || res.ptr != last || !std::isfinite(value)) {
        fail(kind_ + ": key '" + key + "' has invalid number '" +
             std::string(first, last) + "'");
      }
      out.push_back(value);
      pos = comma + 1;
    }
    if (out.size() != count) {
      fail(kind_ + ": key '" + key + "' needs " + std::to_string(count) +
           " values, got " + std::to_string(out.size()));
    }
    return out;
  }

  double number(const std::string& key) { return numbers(key, 1)[0]; }

  double number_or(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  Vec3 vec3(const std::string& key) {
    const auto v = numbers(key, 3);
    return {v[0], v[1], v[2]};
  }

  Mat4 mat4(const std::string& key) {
    const auto v = numbers(key, 16);
    Mat4 m;
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) m(r, c) = v[static_cast<std::size_t>(4 * r + c)];
    }
    return m;
  }

  int integer(const std::string& key) {
    const double v = number(key);
    if (v != std::floor(v) || std::abs(v) > 1e9) fail(kind_ + ": key '" + key + "' must be an integer");
    return static_cast<int>(v);
  }

  bool boolean(const std::string& key) {
    const std::string& v = raw(key);
    if (v == "1" || v == "true") return true;
    if (v == "0" || v == "false") return false;
    fail(kind_ + ": key '" + key + "' must be 0/1/true/false");
  }

  Rgb color_or(Rgb fallback) {
    if (!has("color")) return fallback;
    const auto v = numbers("color", 3);
    for (double c : v) {
      if (c < 0 || c > 255 || c != std::floor(c)) fail(kind_ + ": color channels must be integers in [0, 255]");
    }
    return {static_cast<std::uint8_t>(v[0]), static_cast<std::uint8_t>(v[1]),
            static_cast<std::uint8_t>(v[2])};
  }

  void finish() const {
    for (const auto& [key, _] : values_) {
      if (!used_.count(key)) fail(kind_ + ": unknown key '" + key + "'");
    }
  }

 private:
  std::string source_;
  int line_;
  std::string kind_;
  std::map<std::string, std::string> values_;
  std::set<std::string> used_;
};

std::vector<Record> tokenize(std::string_view text, std::string_view source) {
  std::vector<Record> records;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream words(line);
    std::string word;
    if (!(words >> word)) continue;
    Record rec(std::string(source), lineno, word);
    while (words >> word) rec.add(word);
    records.push_back(std::move(rec));
  }
  return records;
}

const std::array<Rgb, 6> kPalette{{{200, 70, 60}, {70, 130, 200}, {220, 190, 80},
                                   {90, 170, 110}, {170, 110, 190}, {230, 140, 60}}};

CameraSpec parse_camera(Record& rec) {
  CameraSpec cam;
  cam.id = rec.raw("id");
  if (cam.id.empty()) rec.fail("camera: id must not be empty");
  const auto role = parse_camera_role(rec.raw("role"));
  if (!role) rec.fail("camera: role must be 'fixed' or 'wrist'");
  cam.role = *role;

  auto& in = cam.intrinsics;
  in.width = rec.integer("width");
  in.height = rec.integer("height");
  if (rec.has("fov")) {
    if (rec.has("fx") || rec.has("fy")) rec.fail("camera: give either fov or fx/fy");
    const double fov = rec.number("fov");
    if (!(fov > 0.0 && fov < 180.0)) rec.fail("camera: fov must be in (0, 180) degrees");
    in.fx = in.fy = 0.5 * in.width / std::tan(0.5 * fov * M_PI / 180.0);
  } else {
    in.fx = rec.number("fx");
    in.fy = rec.number("fy");
  }
  in.cx = rec.number_or("cx", 0.5 * in.width);
  in.cy = rec.number_or("cy", 0.5 * in.height);
  try {
    in.validate();
  } catch (const ValidationError& e) {
    rec.fail(std::string("camera: ") + e.what());
  }

  try {
    if (cam.role == CameraRole::kFixed) {
      if (rec.has("extrinsics")) {
        cam.extrinsics = CameraExtrinsics::from_matrix(rec.mat4("extrinsics")).matrix();
      } else {
        const Vec3 up = rec.has("up") ? rec.vec3("up") : Vec3::UnitZ();
        cam.extrinsics =
            CameraExtrinsics::look_at(rec.vec3("eye"), rec.vec3("target"), up).matrix();
      }
    } else {
      if (rec.has("hand_eye")) {
        cam.hand_eye = rec.mat4("hand_eye");
        if (auto why = rigidity_violation(cam.hand_eye); !why.empty()) {
          rec.fail("camera: hand_eye " + why);
        }
      } else {
        cam.hand_eye = Mat4::Identity();
        cam.hand_eye.topRightCorner<3, 1>() = rec.vec3("offset");
      }
    }
  } catch (const ValidationError& e) {
    rec.fail(std::string("camera: ") + e.what());
  }
  return cam;
}

}  // namespace

SceneDescription parse_scene_description(std::string_view text, std::string_view source) {
  SceneDescription desc;
  std::set<std::string> ids;
  for (auto& rec : tokenize(text, source)) {
    const Rgb fallback = kPalette[desc.scene.primitives.size() % kPalette.size()];
    if (rec.kind() == "plane") {
      Plane p{rec.vec3("normal"), rec.number("offset")};
      if (!(p.normal.norm() > 0.0)) rec.fail("plane: normal must be non-zero");
      // Normalizing keeps the described plane fixed.
      const double n = p.normal.norm();
      p.normal /= n;
      p.offset /= n;
      desc.scene.primitives.push_back({p, rec.color_or({150, 140, 130})});
    } else if (rec.kind() == "sphere") {
      Sphere s{rec.vec3("center"), rec.number("radius")};
      if (!(s.radius > 0.0)) rec.fail("sphere: radius must be > 0");
      desc.scene.primitives.push_back({s, rec.color_or(fallback)});
    } else if (rec.kind() == "box") {
      Box b{rec.vec3("min"), rec.vec3("max")};
      if (!(b.min.array() < b.max.array()).all()) rec.fail("box: min must be < max on every axis");
      desc.scene.primitives.push_back({b, rec.color_or(fallback)});
    } else if (rec.kind() == "camera") {
      CameraSpec cam = parse_camera(rec);
      if (!ids.insert(cam.id).second) rec.fail("camera: duplicate id '" + cam.id + "'");
      desc.cameras.push_back(std::move(cam));
    } else {
      rec.fail("unknown record kind '" + rec.kind() + "'");
    }
    rec.finish();
  }
  return desc;
}

Trajectory::Trajectory(std::vector<Waypoint> waypoints) : waypoints_(std::move(waypoints)) {
  if (waypoints_.empty()) throw ValidationError("trajectory needs at least one waypoint");
  for (std::size_t i = 0; i < waypoints_.size(); ++i) {
    waypoints_[i].pose.validate();
    if (i > 0 && !(waypoints_[i].t > waypoints_[i - 1].t)) {
      throw ValidationError("trajectory waypoint times must be strictly increasing");
    }
  }
}

TrajectorySample Trajectory::at(double t) const {
  const auto& w = waypoints_;
  if (t <= w.front().t || w.size() == 1) {
    return {t, w.front().pose, w.front().open, w.front().width};
  }
  if (t >= w.back().t) return {t, w.back().pose, w.back().open, w.back().width};
  std::size_t k = 0;
  while (w[k + 1].t <= t) ++k;
  const Waypoint& a = w[k];
  const Waypoint& b = w[k + 1];
  const double s = (t - a.t) / (b.t - a.t);
  TrajectorySample out;
  out.t = t;
  out.pose.position = (1.0 - s) * a.pose.position + s * b.pose.position;
  out.pose.orientation = a.pose.orientation.slerp(s, b.pose.orientation).normalized();
  out.open = a.open;
  if (a.width && b.width) out.width = (1.0 - s) * *a.width + s * *b.width;
  else out.width = a.width;
  return out;
}

std::vector<TrajectorySample> Trajectory::sample(int count) const {
  if (count < 1) throw ValidationError("trajectory sample count must be >= 1");
  std::vector<TrajectorySample> out;
  out.reserve(static_cast<std::size_t>(count));
  const double t0 = waypoints_.front().t;
  const double t1 = waypoints_.back().t;
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? t0 : t0 + (t1 - t0) * i / (count - 1);
    out.push_back(at(t));
  }
  return out;
}

Trajectory parse_trajectory(std::string_view text, std::string_view source) {
  std::vector<Waypoint> waypoints;
  for (auto& rec : tokenize(text, source)) {
    if (rec.kind() != "waypoint") rec.fail("unknown record kind '" + rec.kind() + "'");
    Waypoint w;
    w.t = rec.number("t");
    w.pose.position = rec.vec3("pos");
    const auto q = rec.numbers("quat", 4);
    w.pose.orientation = Quat(q[0], q[1], q[2], q[3]);
    if (!(w.pose.orientation.norm() > 1e-9)) rec.fail("waypoint: quaternion must be non-zero");
    w.pose.orientation.normalize();
    w.open = rec.boolean("open");
    if (rec.has("width")) {
      w.width = rec.number("width");
      if (*w.width < 0.0) rec.fail("waypoint: width must be >= 0");
    }
    try {
      w.pose.validate();
    } catch (const ValidationError& e) {
      rec.fail(std::string("waypoint: ") + e.what());
    }
    if (!waypoints.empty() && !(w.t > waypoints.back().t)) {
      rec.fail("waypoint: times must be strictly increasing");
    }
    rec.finish();
    waypoints.push_back(std::move(w));
  }
  if (waypoints.empty()) throw SchemaError(std::string(source) + ": no waypoints");
  return Trajectory(std::move(waypoints));
}

}  // namespace aimbot
