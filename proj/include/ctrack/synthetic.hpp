#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ctrack/image.hpp"
#include "ctrack/latent.hpp"
#include "ctrack/oracle_denoiser.hpp"
#include "ctrack/tracker.hpp"
#include "ctrack/video_prep.hpp"

namespace ctrack {

/// Textured square whose center follows a Catmull-Rom spline through the
/// keyframes, parameterized uniformly over the clip. One keyframe means a
/// static sprite.
struct Sprite {
  std::vector<Point2> keyframes;
  double half_size = 5.0;
  Rgb base{190, 225, 215};

  Point2 position(int frame, int frames) const;
};

/// Axis-aligned rectangle [x, x + w] x [y, y + h] moving with constant
/// velocity per frame. A point it covers is occluded.
struct Occluder {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  Rgb color{45, 55, 75};

  bool covers(double u, double v, int frame) const;
};

/// Static marker-colored patch in the background.
struct Distractor {
  double x = 0.0;
  double y = 0.0;
  double w = 3.0;
  double h = 3.0;
  Rgb color{240, 20, 25};
};

struct SceneConfig {
  int height = 64;
  int width = 64;
  int frames = 17;
  std::vector<Sprite> sprites;  // one query per sprite, placed on its center
  std::vector<Occluder> occluders;
  std::vector<Distractor> distractors;

  void validate() const;
};

enum class Preset { linear, curved, occlusion, near_boundary, distractor, mixed };

std::string_view to_string(Preset preset);
Preset parse_preset(std::string_view text);

struct SyntheticCase {
  std::string id;
  Preset preset = Preset::linear;
  std::uint64_t seed = 0;
  SceneConfig config;
  VideoTensor video;
  std::vector<Track> gt_tracks;
  SpatioTemporalMask occluder_coverage;  // (F, H, W), 1 where an occluder is drawn
  std::vector<VideoTensor> marker_targets;  // per query, default red marker
};

/// Renders the scene. Texture noise comes from seed; ground truth is the
/// analytic sprite center with visibility from occluder coverage.
SyntheticCase generate_scene(const SceneConfig& config, std::uint64_t seed);

/// Randomized geometry for one preset. `mixed` is not a valid argument here.
SceneConfig preset_config(Preset preset, std::uint64_t seed, int height = 64, int width = 64, int frames = 17);

struct SuiteOptions {
  int height = 64;
  int width = 64;
  int frames = 17;
  std::uint64_t base_seed = 1;
};

/// n cases. `mixed` cycles linear, curved, occlusion, near_boundary,
/// distractor.
std::vector<SyntheticCase> make_suite(int n, Preset preset, const SuiteOptions& options = {});

/// base with the marker disk drawn at the gt point of every gt-visible frame,
/// except where an occluder covers it. Frames past the gt length reuse the
/// last gt point and coverage frame.
VideoTensor render_marker_target(const VideoTensor& base, const Track& gt, const SpatioTemporalMask* coverage,
                                 const MarkerSpec& marker);

/// Random whole-frame jitter: frame 0 unshifted, every other frame moved by
/// magnitude pixels along one of the four axis directions.
std::vector<FrameShift> make_drift(int frames, std::uint64_t seed, int magnitude = 3);

}  // namespace ctrack
