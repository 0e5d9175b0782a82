#pragma once

#include <utility>
#include <vector>

#include "ctrack/color.hpp"
#include "ctrack/image.hpp"

namespace ctrack {

/// Query point marker: a hard-edged disk of fully saturated color.
struct MarkerSpec {
  double hue = 0.0;  // degrees; 0 = pure red, 240 = pure blue
  double radius = 2.0;
  double u = 0.0;    // column
  double v = 0.0;    // row
  int frame = 0;

  Rgb color() const { return hsv_to_rgb({hue, 255.0, 255.0}); }
  void validate() const;
};

/// Desaturation of marker-like colors. A pixel is affected when its hue lies
/// in [marker_hue + hue_low, marker_hue + hue_high] and (S, V) falls inside
/// the ellipse centered at (255, 255) with semi-axes s_axis (along S) and
/// v_axis (along V).
struct RebalanceParams {
  double marker_hue = 0.0;
  double hue_low = -30.0;
  double hue_high = 10.0;
  double s_axis = 80.0;
  double v_axis = 30.0;
  double saturation_cap = 80.0;

  void validate() const;
};

bool needs_rebalance(const Hsv& hsv, const RebalanceParams& params);
Rgb rebalance_pixel(Rgb p, const RebalanceParams& params);
Image rebalance_colors(const Image& frame, const RebalanceParams& params);
VideoTensor rebalance_colors(const VideoTensor& video, const RebalanceParams& params);

/// Pixels within euclidean distance <= radius of (u, v), clipped to the frame.
std::vector<std::pair<int, int>> disk_pixels(int width, int height, double u, double v, double radius);

/// Recolors the marker disk. Throws if (u, v) lies outside the frame.
Image insert_marker(const Image& frame, const MarkerSpec& spec);

struct PaddedVideo {
  VideoTensor video;
  int original_length = 0;
};

/// Repeats the last frame until the length is 1 mod 4.
PaddedVideo pad_video(const VideoTensor& video);
int padded_length(int frames);
VideoTensor truncate_video(const VideoTensor& video, int length);

}  // namespace ctrack
