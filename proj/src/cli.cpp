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

#include "aimbot/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include "aimbot/bench.hpp"
#include "aimbot/dataset.hpp"
#include "aimbot/error.hpp"
#include "aimbot/png_io.hpp"
#include "aimbot/synthscene.hpp"

namespace aimbot::cli {

namespace fs = std::filesystem;

namespace {

struct RenderFlags {
  std::string style = "default";
  double delta = MarchConfig{}.step_delta;
  double epsilon = MarchConfig{}.epsilon;
  int tolerance = MarchConfig{}.tolerance;
  double max_length = MarchConfig{}.max_length;
  std::uint64_t seed = 0;
  double noise_pos = RenderStyle{}.noise_pos_sigma;
  double noise_rot = RenderStyle{}.noise_rot_sigma;
  double grasp_threshold = RenderStyle{}.grasp_threshold;

  MarchConfig march() const {
    MarchConfig c;
    c.step_delta = delta;
    c.epsilon = epsilon;
    c.tolerance = tolerance;
    c.max_length = max_length;
    c.validate();
    return c;
  }

  RenderStyle render_style() const {
    RenderStyle s;
    const auto variant = parse_style_variant(style);
    if (!variant) throw ValidationError("unknown style '" + style + "'");
    s.variant = *variant;
    s.rng_seed = seed;
    s.noise_pos_sigma = noise_pos;
    s.noise_rot_sigma = noise_rot;
    s.grasp_threshold = grasp_threshold;
    s.validate();
    return s;
  }
};

std::vector<std::string> style_names() {
  std::vector<std::string> names;
  for (const auto v : all_style_variants()) names.emplace_back(to_string(v));
  return names;
}

void add_render_flags(CLI::App* cmd, RenderFlags& f) {
  cmd->add_option("--style", f.style, "Render style")
      ->transform(CLI::CheckedTransformer(
          [] {
            std::map<std::string, std::string> m;
            for (const auto& n : style_names()) {
              m[n] = n;
              std::string dashed = n;
              std::replace(dashed.begin(), dashed.end(), '_', '-');
              m[dashed] = n;
            }
            return m;
          }(),
          CLI::ignore_case)
                     .description("{default, plain_color, grasp_sense, fixed_length, "
                                  "small_scale, bullseye, randomized}"))
      ->capture_default_str();
  cmd->add_option("--delta", f.delta, "March step length (m)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--epsilon", f.epsilon, "Visibility slack (m)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--tolerance", f.tolerance, "Consecutive invisible steps allowed")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--max-length", f.max_length, "March length cap (m)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--seed", f.seed, "Seed for the randomized style")->capture_default_str();
  cmd->add_option("--noise-pos", f.noise_pos, "Randomized style position sigma (m)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--noise-rot", f.noise_rot, "Randomized style rotation sigma (rad)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--grasp-threshold", f.grasp_threshold, "Grasp-sense depth threshold (m)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

std::string fmt_ms(double ns) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << ns / 1e6 << " ms";
  return os.str();
}

int cmd_augment(const fs::path& input, const fs::path& output, const MarchConfig& cfg,
                const RenderStyle& style, int jobs, std::ostream& out, std::ostream& err) {
  const Episode episode = load_episode(input);
  const AugmentSummary s = augment_episode(episode, cfg, style, output, jobs);

  out << "augmented " << s.frames << " frames (" << s.images_written << " images) in "
      << std::fixed << std::setprecision(3) << s.wall_seconds << " s; early returns:";
  for (const auto& [id, count] : s.early_returns) out << " " << id << "=" << count;
  out << "; errors: " << s.errors.size() << "\n";
  for (const auto& e : s.errors) err << "error: " << e.message << "\n";
  return s.errors.empty() ? kExitOk : kExitDataError;
}

int cmd_render_frame(const fs::path& input, std::size_t frame, const std::string& camera,
                     const fs::path& output, const MarchConfig& cfg, const RenderStyle& style,
                     std::ostream& out, std::ostream& err) {
  const Episode episode = load_episode(input);
  if (frame >= episode.frame_count()) {
    err << "error: frame " << frame << " out of range (episode has " << episode.frame_count()
        << " frames)\n";
    return kExitUsage;
  }
  const auto& cams = episode.manifest().cameras;
  const auto it = std::find_if(cams.begin(), cams.end(),
                               [&](const CameraEntry& c) { return c.id == camera; });
  if (it == cams.end()) {
    err << "error: unknown camera '" << camera << "'\n";
    return kExitUsage;
  }
  const auto k = static_cast<std::size_t>(it - cams.begin());
  const FrameBundle bundle = episode.frame_lenient(frame);
  const FrameAugmentation aug = augment_frame(bundle, cfg, style);
  if (output.has_parent_path()) fs::create_directories(output.parent_path());
  write_png_rgb(output, aug.views[k].image);
  out << "wrote " << output.string() << (aug.views[k].early_return ? " (no overlay)" : "")
      << "\n";
  if (aug.error) {
    err << "error: " << *aug.error << "\n";
    return kExitDataError;
  }
  return kExitOk;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError(p, "cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_synth(const fs::path& scene, const fs::path& trajectory, int frames, double max_length,
              const fs::path& output, std::ostream& out) {
  const SceneDescription desc = parse_scene_description(read_file(scene), scene.string());
  const Trajectory traj = parse_trajectory(read_file(trajectory), trajectory.string());
  SynthOptions opt;
  opt.frames = frames;
  opt.max_length = max_length;
  const auto truth = write_synthetic_episode(desc, traj, opt, output);
  out << "wrote " << frames << " frames x " << desc.cameras.size() << " cameras to "
      << output.string() << " (" << truth.size() << " ground-truth records)\n";
  return kExitOk;
}

int cmd_validate(const fs::path& input, std::ostream& out, std::ostream& err) {
  EpisodeManifest m;
  try {
    m = read_manifest(input / kManifestName);
  } catch (const IoError& e) {
    err << "violation: " << e.what() << "\n";
    return kExitDataError;
  }
  const auto violations = find_violations(m, input);
  if (violations.empty()) {
    out << "ok: " << m.frames.size() << " frames, " << m.cameras.size() << " cameras\n";
    return kExitOk;
  }
  for (const auto& v : violations) err << "violation: " << v << "\n";
  out << violations.size() << " violation(s)\n";
  return kExitDataError;
}

int cmd_bench(const std::optional<fs::path>& input, int iters, const MarchConfig& cfg,
              const RenderStyle& style, const std::optional<fs::path>& json_out,
              std::ostream& out) {
  std::vector<FrameBundle> frames;
  if (input) {
    const Episode episode = load_episode(*input);
    for (std::size_t i = 0; i < episode.frame_count(); ++i) frames.push_back(episode.frame(i));
  } else {
    frames.push_back(reference_frame());
  }
  if (frames.empty()) throw ValidationError("episode has no frames");
  const LatencyReport r = time_augment(frames, cfg, style, iters);

  std::string roles;
  for (const auto& role : r.workload.roles) roles += (roles.empty() ? "" : "+") + role;
  out << "workload: " << r.workload.width << "x" << r.workload.height << " " << roles
      << ", style " << r.workload.style << ", " << r.bundle_ns.size() << " timed of " << iters
      << " iterations, " << r.build << " build, " << r.hardware.cpu << "\n";
  out << "per image  p50 " << fmt_ms(r.image.p50) << "  p95 " << fmt_ms(r.image.p95)
      << "  p99 " << fmt_ms(r.image.p99) << "\n";
  out << "per frame  p50 " << fmt_ms(r.bundle.p50) << "  p95 " << fmt_ms(r.bundle.p95)
      << "  p99 " << fmt_ms(r.bundle.p99) << "\n";
  const std::string line = to_json_line(r);
  out << line << "\n";
  if (json_out) {
    std::ofstream f(*json_out, std::ios::app);
    if (!f) throw IoError(*json_out, "cannot open for writing");
    f << line << "\n";
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Overlay shooting lines and reticles on RGB-D robot episodes", "aimbot"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI/TOML file with flag values")->envname("AIMBOT_CONFIG");

  std::string input, output, scene, trajectory, camera, json_out;
  RenderFlags flags;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  int frames = 20;
  std::size_t frame_index = 0;
  int iters = 1000;
  double synth_max_length = MarchConfig{}.max_length;

  auto* augment = app.add_subcommand("augment", "Augment every frame of an episode");
  augment->add_option("--input", input, "Episode directory")->required();
  augment->add_option("--output", output, "Output directory")->required();
  augment->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  add_render_flags(augment, flags);

  auto* render = app.add_subcommand("render-frame", "Augment a single frame and camera");
  render->add_option("--input", input, "Episode directory")->required();
  render->add_option("--frame", frame_index, "Frame index")->required();
  render->add_option("--camera", camera, "Camera id")->required();
  render->add_option("--output", output, "Output PNG")->required();
  add_render_flags(render, flags);

  auto* synth = app.add_subcommand("synth", "Generate a synthetic episode");
  synth->add_option("--scene", scene, "Scene description file")->required();
  synth->add_option("--trajectory", trajectory, "Trajectory file")->required();
  synth->add_option("--frames", frames, "Number of frames")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth->add_option("--output", output, "Output episode directory")->required();
  synth->add_option("--max-length", synth_max_length, "Ground-truth march cap (m)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  auto* validate = app.add_subcommand("validate", "Check an episode for schema and data errors");
  validate->add_option("--input", input, "Episode directory")->required();

  auto* bench = app.add_subcommand("bench", "Measure augmentation latency");
  bench->add_option("--input", input, "Episode directory (default: built-in workload)");
  bench->add_option("--iters", iters, "Iterations including warm-up")
      ->check(CLI::Range(kMinBenchIterations, 100000000))
      ->capture_default_str();
  bench->add_option("--json", json_out, "Append the JSON-lines report to this file");
  add_render_flags(bench, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  // Flag values are checked against the type invariants before any work.
  MarchConfig cfg;
  RenderStyle style;
  try {
    cfg = flags.march();
    style = flags.render_style();
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (augment->parsed()) return cmd_augment(input, output, cfg, style, jobs, out, err);
    if (render->parsed()) {
      return cmd_render_frame(input, frame_index, camera, output, cfg, style, out, err);
    }
    if (synth->parsed()) {
      return cmd_synth(scene, trajectory, frames, synth_max_length, output, out);
    }
    if (validate->parsed()) return cmd_validate(input, out, err);
    if (bench->parsed()) {
      return cmd_bench(input.empty() ? std::nullopt : std::optional<fs::path>(input), iters,
                       cfg, style, json_out.empty() ? std::nullopt : std::optional<fs::path>(json_out),
                       out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitUsage;
}

}  // namespace aimbot::cli
