#pragma once

#include <string>
#include <vector>

#include "ctrack/color.hpp"
#include "ctrack/image.hpp"

namespace ctrack {

struct Point2 {
  double u = 0.0;  // column
  double v = 0.0;  // row
  bool operator==(const Point2&) const = default;
};

struct PixelCoord {
  int u = 0;
  int v = 0;
  bool operator==(const PixelCoord&) const = default;
};

enum class ColorSpace { hsv, lab };

/// Marker detection and search parameters, in generation-resolution pixels.
/// Defaults are for a 480-row generation frame; scaled_for() adapts them.
struct TrackerParams {
  double marker_hue = 0.0;
  double hue_below = 10.0;  // accepted hue: [H - hue_below, H + hue_above]
  double hue_above = 5.0;
  double s_min = 150.0;
  double s_max = 255.0;
  double v_min = 150.0;
  double v_max = 255.0;
  double r_default = 90.0;
  double r_max = 150.0;
  double expansion = 1.1;
  double averaging_radius = 20.0;
  ColorSpace color_space = ColorSpace::hsv;
  double lab_tolerance = 35.0;  // max Delta E to the marker color in LAB mode

  void validate() const;

  /// Radii rescaled by min(height, width) / 480. The averaging radius never
  /// drops below 2 * marker_radius + 1 so one whole marker disk stays inside
  /// it.
  TrackerParams scaled_for(int height, int width, double marker_radius) const;
};

bool is_marker_pixel(Rgb p, const TrackerParams& params);

struct TrackState {
  Point2 position;
  double radius = 90.0;
  bool occluded = false;
};

struct TrackPoint {
  double u = 0.0;
  double v = 0.0;
  bool visible = true;
  bool operator==(const TrackPoint&) const = default;
};

struct Query {
  int frame = 0;
  double u = 0.0;
  double v = 0.0;
  bool operator==(const Query&) const = default;
};

/// Per-frame positions in pixels of a height x width frame.
struct Track {
  std::string video_id;
  Query query;
  int height = 0;
  int width = 0;
  std::vector<TrackPoint> points;

  int length() const { return static_cast<int>(points.size()); }
  bool operator==(const Track&) const = default;
};

/// Marker-colored pixels within distance <= radius of center, in row-major
/// scan order.
std::vector<PixelCoord> detect_marker_pixels(const Image& frame, Point2 center, double radius,
                                             const TrackerParams& params);

struct FrameResult {
  Point2 point;
  bool visible = false;
  TrackState next;
};

/// One tracking update. On detection: anchor at the detection nearest the
/// previous position (first in scan order on ties), report the mean of all
/// detections within averaging_radius of it, reset the radius. Otherwise hold
/// the position, mark occluded and grow the radius by the expansion factor up
/// to r_max.
FrameResult track_frame(const TrackState& state, const Image& frame, const TrackerParams& params);

/// Tracks from a first-frame query through the whole video.
Track track_video(const VideoTensor& video, const Query& query, const TrackerParams& params);

}  // namespace ctrack
