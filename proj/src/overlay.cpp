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

#include "aimbot/overlay.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <utility>

#include "aimbot/error.hpp"
#include "aimbot/visibility.hpp"

namespace aimbot {

namespace {

struct VariantName {
  StyleVariant variant;
  std::string_view name;
};

constexpr std::array<VariantName, 7> kVariantNames{{
    {StyleVariant::kDefault, "default"},
    {StyleVariant::kPlainColor, "plain_color"},
    {StyleVariant::kGraspSense, "grasp_sense"},
    {StyleVariant::kFixedLength, "fixed_length"},
    {StyleVariant::kSmallScale, "small_scale"},
    {StyleVariant::kBullseye, "bullseye"},
    {StyleVariant::kRandomized, "randomized"},
}};

// Liang-Barsky clip of a segment against [lo, hi] in both axes. Returns
// false when nothing is left.
bool clip_segment(double& x0, double& y0, double& x1, double& y1, double xlo,
                  double ylo, double xhi, double yhi) {
  const double dx = x1 - x0;
  const double dy = y1 - y0;
  double t0 = 0.0;
  double t1 = 1.0;
  const std::array<std::pair<double, double>, 4> edges{{
      {-dx, x0 - xlo}, {dx, xhi - x0}, {-dy, y0 - ylo}, {dy, yhi - y0}}};
  for (const auto& [p, q] : edges) {
    if (p == 0.0) {
      if (q < 0.0) return false;
      continue;
    }
    const double r = q / p;
    if (p < 0.0) {
      if (r > t1) return false;
      t0 = std::max(t0, r);
    } else {
      if (r < t0) return false;
      t1 = std::min(t1, r);
    }
  }
  const double ox = x0;
  const double oy = y0;
  x0 = ox + t0 * dx;
  y0 = oy + t0 * dy;
  x1 = ox + t1 * dx;
  y1 = oy + t1 * dy;
  return true;
}

void plot(RgbImage& img, int u, int v, Rgb c) {
  if (img.contains(u, v)) img.set(u, v, c);
}

// Integer Bresenham core; each core pixel is widened along the minor axis.
void draw_segment(RgbImage& img, const Segment& s) {
  const int t = std::max(1, s.thickness);
  const double margin = t + 1.0;
  double fx0 = s.a.u, fy0 = s.a.v, fx1 = s.b.u, fy1 = s.b.v;
  if (!clip_segment(fx0, fy0, fx1, fy1, -margin, -margin,
                    img.width() - 1 + margin, img.height() - 1 + margin)) {
    return;
  }
  int x0 = static_cast<int>(std::lround(fx0));
  int y0 = static_cast<int>(std::lround(fy0));
  const int x1 = static_cast<int>(std::lround(fx1));
  const int y1 = static_cast<int>(std::lround(fy1));

  const int dx = std::abs(x1 - x0);
  const int dy = -std::abs(y1 - y0);
  const int sx = x0 < x1 ? 1 : -1;
  const int sy = y0 < y1 ? 1 : -1;
  const bool x_major = dx >= -dy;
  const int lo = -(t - 1) / 2;
  const int hi = t / 2;
  int err = dx + dy;
  for (;;) {
    for (int o = lo; o <= hi; ++o) {
      if (x_major) {
        plot(img, x0, y0 + o, s.color);
      } else {
        plot(img, x0 + o, y0, s.color);
      }
    }
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

void draw_ring(RgbImage& img, const Ring& r) {
  const double half = std::max(1, r.thickness) / 2.0;
  const double reach = r.radius + half + 1.0;
  const double cu = r.center.u;
  const double cv = r.center.v;
  const int u0 = static_cast<int>(std::max(0.0, std::floor(cu - reach)));
  const int v0 = static_cast<int>(std::max(0.0, std::floor(cv - reach)));
  const int u1 = static_cast<int>(std::min(img.width() - 1.0, std::ceil(cu + reach)));
  const int v1 = static_cast<int>(std::min(img.height() - 1.0, std::ceil(cv + reach)));
  for (int v = v0; v <= v1; ++v) {
    for (int u = u0; u <= u1; ++u) {
      const double d = std::hypot(u - cu, v - cv);
      if (std::abs(d - r.radius) <= half) img.set(u, v, r.color);
    }
  }
}

void draw_disk(RgbImage& img, const Disk& d) {
  const long r = std::max(0, d.radius);
  const long cu = d.center.u;
  const long cv = d.center.v;
  const long u0 = std::max(0L, cu - r);
  const long v0 = std::max(0L, cv - r);
  const long u1 = std::min(static_cast<long>(img.width()) - 1, cu + r);
  const long v1 = std::min(static_cast<long>(img.height()) - 1, cv + r);
  for (long v = v0; v <= v1; ++v) {
    for (long u = u0; u <= u1; ++u) {
      if ((u - cu) * (u - cu) + (v - cv) * (v - cv) <= r * r) {
        img.set(static_cast<int>(u), static_cast<int>(v), d.color);
      }
    }
  }
}

struct Run {
  std::size_t first;
  std::size_t last;
  std::size_t size() const { return last - first + 1; }
};

std::vector<Run> visible_runs(const std::vector<bool>& visibility) {
  std::vector<Run> runs;
  for (std::size_t i = 0; i < visibility.size(); ++i) {
    if (!visibility[i]) continue;
    if (!runs.empty() && runs.back().last + 1 == i) {
      runs.back().last = i;
    } else {
      runs.push_back({i, i});
    }
  }
  return runs;
}

void check_inputs(const DepthImage& depth, const CameraIntrinsics& intr,
                  const GripperState& gripper, const MarchConfig& cfg,
                  const RenderStyle& style) {
  intr.validate();
  require_matching_size(depth, intr);
  gripper.validate();
  cfg.validate();
  style.validate();
}

void check_image(const RgbImage& image, const DepthImage& depth) {
  if (image.width() != depth.width() || image.height() != depth.height()) {
    throw ValidationError("rgb image is " + std::to_string(image.width()) + "x" +
                          std::to_string(image.height()) + " but depth is " +
                          std::to_string(depth.width()) + "x" +
                          std::to_string(depth.height()));
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::string_view to_string(StyleVariant v) {
  for (const auto& [variant, name] : kVariantNames) {
    if (variant == v) return name;
  }
  return "default";
}

std::optional<StyleVariant> parse_style_variant(std::string_view name) {
  std::string canonical(name);
  std::replace(canonical.begin(), canonical.end(), '-', '_');
  for (const auto& [variant, n] : kVariantNames) {
    if (n == canonical) return variant;
  }
  return std::nullopt;
}

const std::vector<StyleVariant>& all_style_variants() {
  static const std::vector<StyleVariant> variants = [] {
    std::vector<StyleVariant> v;
    for (const auto& entry : kVariantNames) v.push_back(entry.variant);
    return v;
  }();
  return variants;
}

RenderStyle RenderStyle::for_image_height(int height, StyleVariant variant) {
  RenderStyle s;
  s.variant = variant;
  return s.scaled_to_height(height);
}

RenderStyle RenderStyle::scaled_to_height(int height) const {
  if (height == kReferenceHeight) return *this;
  RenderStyle s = *this;
  const double scale = static_cast<double>(height) / kReferenceHeight;
  s.line_thickness = std::max(1, static_cast<int>(std::lround(line_thickness * scale)));
  s.dot_radius = std::max(1, static_cast<int>(std::lround(dot_radius * scale)));
  s.min_reticle_len = min_reticle_len * scale;
  s.max_reticle_len = max_reticle_len * scale;
  return s;
}

void RenderStyle::validate() const {
  if (line_thickness < 1) throw ValidationError("line thickness must be >= 1");
  if (dot_radius < 0) throw ValidationError("dot radius must be >= 0");
  if (!(min_reticle_len >= 0.0 && min_reticle_len <= max_reticle_len &&
        std::isfinite(max_reticle_len))) {
    throw ValidationError("reticle length bounds must satisfy 0 <= min <= max");
  }
  if (!(max_ee_to_surface > 0.0 && std::isfinite(max_ee_to_surface))) {
    throw ValidationError("max EE-to-surface distance must be positive");
  }
  if (!(noise_pos_sigma >= 0.0 && noise_rot_sigma >= 0.0 &&
        std::isfinite(noise_pos_sigma) && std::isfinite(noise_rot_sigma))) {
    throw ValidationError("noise sigmas must be finite and non-negative");
  }
  if (!(grasp_threshold > 0.0)) {
    throw ValidationError("grasp threshold must be positive");
  }
}

void GripperState::validate() const {
  pose.validate();
  if (width && !(*width >= 0.0 && std::isfinite(*width))) {
    throw ValidationError("gripper width must be finite and >= 0");
  }
}

ResolvedStyle apply_style_variant(const RenderStyle& style,
                                  const GripperState& gripper,
                                  bool grasp_detected) {
  ResolvedStyle r;
  r.line_color = gripper.open ? style.open_line_color : style.closed_line_color;
  r.dot_color = gripper.open ? style.open_dot_color : style.closed_dot_color;
  r.reticle_color = style.open_line_color;
  r.thickness = style.line_thickness;
  r.dot_radius = style.dot_radius;
  r.min_reticle_len = style.min_reticle_len;
  r.max_reticle_len = style.max_reticle_len;
  r.max_ee_to_surface = style.max_ee_to_surface;

  switch (style.variant) {
    case StyleVariant::kDefault:
    case StyleVariant::kRandomized:
      break;
    case StyleVariant::kPlainColor:
      r.line_color = r.dot_color = r.reticle_color = style.plain_color;
      break;
    case StyleVariant::kGraspSense:
      if (!gripper.open && grasp_detected) {
        r.line_color = r.reticle_color = style.grasp_color;
      }
      break;
    case StyleVariant::kFixedLength:
      r.fixed_length = true;
      break;
    case StyleVariant::kSmallScale:
      r.thickness = std::max(1, r.thickness / 2);
      r.dot_radius = std::max(1, r.dot_radius / 2);
      r.min_reticle_len /= 2.0;
      r.max_reticle_len /= 2.0;
      break;
    case StyleVariant::kBullseye:
      r.bullseye = true;
      break;
  }
  return r;
}

double reticle_arm_length(double projection_distance, const ResolvedStyle& style) {
  const double span = style.max_reticle_len - style.min_reticle_len;
  if (style.fixed_length) return style.min_reticle_len + 0.5 * span;
  const double scaling = std::clamp(
      (style.max_ee_to_surface - projection_distance) / style.max_ee_to_surface, 0.0,
      1.0);
  return style.min_reticle_len + scaling * span;
}

void rasterize(const OverlayPlan& plan, RgbImage& image) {
  if (plan.early_return) return;
  for (const auto& s : plan.segments) draw_segment(image, s);
  for (const auto& r : plan.rings) draw_ring(image, r);
  for (const auto& d : plan.disks) draw_disk(image, d);
}

OverlayPlan plan_fixed(const DepthImage& depth, const CameraExtrinsics& extr,
                       const CameraIntrinsics& intr, const GripperState& gripper,
                       const MarchConfig& cfg, const RenderStyle& style,
                       bool grasp_detected) {
  check_inputs(depth, intr, gripper, cfg, style);
  OverlayPlan plan;
  plan.march.origin = world_to_image(gripper.pose.position, extr, intr);
  if (!check_visibility(plan.march.origin, depth, cfg.epsilon)) return plan;

  plan.early_return = false;
  plan.march = find_stop_point(gripper.pose, extr, intr, depth, cfg);
  const ResolvedStyle rs = apply_style_variant(style, gripper, grasp_detected);
  const Pixel origin{plan.march.origin.u, plan.march.origin.v};
  const auto& pts = plan.march.points2d;

  auto run_segment = [&](const Run& run) {
    const Pixel start = run.first == 0 ? origin : pts[run.first];
    return Segment{start, pts[run.last], rs.thickness, rs.line_color};
  };

  const std::vector<Run> runs = visible_runs(plan.march.visibility);
  if (!runs.empty()) {
    if (gripper.open) {
      const auto longest = std::max_element(
          runs.begin(), runs.end(),
          [](const Run& a, const Run& b) { return a.size() < b.size(); });
      plan.segments.push_back(run_segment(*longest));
    } else {
      for (const auto& run : runs) plan.segments.push_back(run_segment(run));
    }
  }
  plan.disks.push_back({origin, rs.dot_radius, rs.dot_color});
  return plan;
}

OverlayPlan plan_wrist(const DepthImage& depth, const CameraExtrinsics& extr,
                       const CameraIntrinsics& intr, const GripperState& gripper,
                       const MarchConfig& cfg, const RenderStyle& style,
                       bool grasp_detected) {
  check_inputs(depth, intr, gripper, cfg, style);
  OverlayPlan plan;
  plan.march.origin = world_to_image(gripper.pose.position, extr, intr);
  if (!(plan.march.origin.z > 0.0)) return plan;

  plan.early_return = false;
  plan.march = find_stop_point(gripper.pose, extr, intr, depth, cfg);
  const ResolvedStyle rs = apply_style_variant(style, gripper, grasp_detected);
  plan.arm_length = reticle_arm_length(plan.march.projection_distance, rs);

  const Pixel c = plan.march.stop_pixel;
  if (rs.bullseye) {
    for (int k = 1; k <= 3; ++k) {
      plan.rings.push_back({c, plan.arm_length * k / 3.0, rs.thickness, rs.reticle_color});
    }
  } else {
    const int arm = static_cast<int>(std::lround(plan.arm_length));
    plan.segments.push_back({{c.u - arm, c.v}, {c.u + arm, c.v}, rs.thickness, rs.reticle_color});
    plan.segments.push_back({{c.u, c.v - arm}, {c.u, c.v + arm}, rs.thickness, rs.reticle_color});
  }
  plan.disks.push_back({c, rs.dot_radius, rs.dot_color});
  return plan;
}

RenderOutcome render_fixed(const RgbImage& image, const DepthImage& depth,
                           const CameraExtrinsics& extr, const CameraIntrinsics& intr,
                           const GripperState& gripper, const MarchConfig& cfg,
                           const RenderStyle& style, bool grasp_detected) {
  check_image(image, depth);
  RenderOutcome out{image, plan_fixed(depth, extr, intr, gripper, cfg, style, grasp_detected)};
  rasterize(out.plan, out.image);
  return out;
}

RenderOutcome render_wrist(const RgbImage& image, const DepthImage& depth,
                           const CameraExtrinsics& extr, const CameraIntrinsics& intr,
                           const GripperState& gripper, const MarchConfig& cfg,
                           const RenderStyle& style, bool grasp_detected) {
  check_image(image, depth);
  RenderOutcome out{image, plan_wrist(depth, extr, intr, gripper, cfg, style, grasp_detected)};
  rasterize(out.plan, out.image);
  return out;
}

bool grasp_sense(const DepthImage& depth_wrist, const CameraExtrinsics& extr_wrist,
                 const CameraIntrinsics& intr, const GripperState& gripper,
                 double threshold) {
  require_matching_size(depth_wrist, intr);
  gripper.validate();
  const int w = depth_wrist.width();
  const int h = depth_wrist.height();
  const int half = std::max(2, std::min(w, h) / 16);

  const PixelProjection p = world_to_image(gripper.pose.position, extr_wrist, intr);
  int cu = w / 2;
  int cv = h / 2;
  if (p.z > 0.0 && p.u >= 0 && p.u < w && p.v >= 0 && p.v < h) {
    cu = p.u;
    cv = p.v;
  }

  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(4 * half * half));
  for (int v = std::max(0, cv - half); v < std::min(h, cv + half); ++v) {
    for (int u = std::max(0, cu - half); u < std::min(w, cu + half); ++u) {
      const double d = depth_wrist.at(u, v);
      if (DepthImage::is_valid_depth(d)) samples.push_back(d);
    }
  }
  if (samples.empty()) return false;
  const auto k = (samples.size() - 1) / 10;
  std::nth_element(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(k),
                   samples.end());
  return samples[k] < threshold;
}

GripperState randomize_cue(const GripperState& gripper, const RenderStyle& style,
                           std::uint64_t frame_index, std::string_view camera_id) {
  if (style.variant != StyleVariant::kRandomized) return gripper;
  if (style.noise_pos_sigma == 0.0 && style.noise_rot_sigma == 0.0) return gripper;

  std::uint64_t key = splitmix64(style.rng_seed);
  key = splitmix64(key ^ frame_index);
  key = splitmix64(key ^ fnv1a(camera_id));
  std::mt19937_64 gen(key);
  std::normal_distribution<double> normal(0.0, 1.0);

  GripperState out = gripper;
  for (int i = 0; i < 3; ++i) out.pose.position[i] += style.noise_pos_sigma * normal(gen);

  Vec3 axis(normal(gen), normal(gen), normal(gen));
  const double angle = std::abs(style.noise_rot_sigma * normal(gen));
  if (axis.norm() > 1e-12 && angle > 0.0) {
    const Quat delta(Eigen::AngleAxisd(angle, axis.normalized()));
    out.pose.orientation = (delta * gripper.pose.orientation).normalized();
  }
  return out;
}

}  // namespace aimbot
