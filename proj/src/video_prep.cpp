#include "ctrack/video_prep.hpp"

#include <cmath>
#include <string>

namespace ctrack {

void MarkerSpec::validate() const {
  if (!(radius >= 1.0) || !std::isfinite(radius)) throw InvalidArgument("MarkerSpec: radius must be >= 1");
  if (!std::isfinite(hue)) throw InvalidArgument("MarkerSpec: hue must be finite");
}

void RebalanceParams::validate() const {
  if (!(s_axis > 0.0 && v_axis > 0.0)) throw InvalidArgument("RebalanceParams: axes must be positive");
  if (!(saturation_cap >= 0.0 && saturation_cap <= 255.0))
    throw InvalidArgument("RebalanceParams: saturation cap must be in [0,255]");
  if (!(hue_low <= hue_high)) throw InvalidArgument("RebalanceParams: empty hue window");
}

bool needs_rebalance(const Hsv& hsv, const RebalanceParams& params) {
  if (!hue_in_window(hsv.h, params.marker_hue, params.hue_low, params.hue_high)) return false;
  const double ds = (hsv.s - 255.0) / params.s_axis;
  const double dv = (hsv.v - 255.0) / params.v_axis;
  return ds * ds + dv * dv <= 1.0;
}

Rgb rebalance_pixel(Rgb p, const RebalanceParams& params) {
  Hsv hsv = rgb_to_hsv(p);
  if (!needs_rebalance(hsv, params) || hsv.s <= params.saturation_cap) return p;
  hsv.s = params.saturation_cap;
  return hsv_to_rgb(hsv);
}

Image rebalance_colors(const Image& frame, const RebalanceParams& params) {
  params.validate();
  Image out = frame;
  for (Rgb& p : out.pixels()) p = rebalance_pixel(p, params);
  return out;
}

VideoTensor rebalance_colors(const VideoTensor& video, const RebalanceParams& params) {
  std::vector<Image> frames;
  frames.reserve(static_cast<std::size_t>(video.frames()));
  for (const auto& f : video.frame_list()) frames.push_back(rebalance_colors(f, params));
  return VideoTensor(std::move(frames));
}

std::vector<std::pair<int, int>> disk_pixels(int width, int height, double u, double v, double radius) {
  std::vector<std::pair<int, int>> out;
  const int x0 = std::max(0, static_cast<int>(std::floor(u - radius)));
  const int x1 = std::min(width - 1, static_cast<int>(std::ceil(u + radius)));
  const int y0 = std::max(0, static_cast<int>(std::floor(v - radius)));
  const int y1 = std::min(height - 1, static_cast<int>(std::ceil(v + radius)));
  const double r2 = radius * radius;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double dx = x - u, dy = y - v;
      if (dx * dx + dy * dy <= r2) out.emplace_back(x, y);
    }
  }
  return out;
}

Image insert_marker(const Image& frame, const MarkerSpec& spec) {
  spec.validate();
  if (!(spec.u >= -0.5 && spec.v >= -0.5 && spec.u < frame.width() - 0.5 && spec.v < frame.height() - 0.5))
    throw InvalidArgument("insert_marker: point (" + std::to_string(spec.u) + ", " + std::to_string(spec.v) +
                          ") outside the frame");
  Image out = frame;
  const Rgb color = spec.color();
  for (auto [x, y] : disk_pixels(frame.width(), frame.height(), spec.u, spec.v, spec.radius)) out.at(x, y) = color;
  return out;
}

int padded_length(int frames) {
  if (frames < 1) throw InvalidArgument("pad_video: need at least one frame");
  const int rem = (frames - 1) % 4;
  return rem == 0 ? frames : frames + (4 - rem);
}

PaddedVideo pad_video(const VideoTensor& video) {
  const int target = padded_length(video.frames());
  std::vector<Image> frames = video.frame_list();
  while (static_cast<int>(frames.size()) < target) frames.push_back(video.frame(video.frames() - 1));
  return {VideoTensor(std::move(frames)), video.frames()};
}

VideoTensor truncate_video(const VideoTensor& video, int length) {
  if (length < 0 || length > video.frames()) throw InvalidArgument("truncate_video: bad length");
  std::vector<Image> frames(video.frame_list().begin(), video.frame_list().begin() + length);
  return VideoTensor(std::move(frames));
}

}  // namespace ctrack
