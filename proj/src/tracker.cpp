#include "ctrack/tracker.hpp"

#include <algorithm>
#include <cmath>

#include "ctrack/errors.hpp"
#include "ctrack/video_prep.hpp"

namespace ctrack {

void TrackerParams::validate() const {
  auto in_byte_range = [](double lo, double hi) { return lo >= 0.0 && hi <= 255.0 && lo <= hi; };
  if (!in_byte_range(s_min, s_max) || !in_byte_range(v_min, v_max))
    throw InvalidArgument("TrackerParams: S/V ranges must lie in [0,255]");
  if (!(hue_below >= 0.0 && hue_above >= 0.0)) throw InvalidArgument("TrackerParams: negative hue tolerance");
  if (!(r_default > 0.0 && r_default <= r_max)) throw InvalidArgument("TrackerParams: need 0 < r_default <= r_max");
  if (!(expansion > 1.0)) throw InvalidArgument("TrackerParams: expansion factor must exceed 1");
  if (!(averaging_radius >= 0.0)) throw InvalidArgument("TrackerParams: negative averaging radius");
  if (!(lab_tolerance > 0.0)) throw InvalidArgument("TrackerParams: LAB tolerance must be positive");
}

TrackerParams TrackerParams::scaled_for(int height, int width, double marker_radius) const {
  TrackerParams out = *this;
  const double s = std::min(height, width) / 480.0;
  out.r_default = r_default * s;
  out.r_max = r_max * s;
  out.averaging_radius = std::max(averaging_radius * s, 2.0 * marker_radius + 1.0);
  return out;
}

bool is_marker_pixel(Rgb p, const TrackerParams& params) {
  if (params.color_space == ColorSpace::lab) {
    const Lab reference = rgb_to_lab(hsv_to_rgb({params.marker_hue, 255.0, 255.0}));
    return delta_e(rgb_to_lab(p), reference) <= params.lab_tolerance;
  }
  const Hsv hsv = rgb_to_hsv(p);
  return hsv.s >= params.s_min && hsv.s <= params.s_max && hsv.v >= params.v_min && hsv.v <= params.v_max &&
         hue_in_window(hsv.h, params.marker_hue, -params.hue_below, params.hue_above);
}

std::vector<PixelCoord> detect_marker_pixels(const Image& frame, Point2 center, double radius,
                                             const TrackerParams& params) {
  if (!(radius > 0.0)) throw InvalidArgument("detect_marker_pixels: radius must be positive");
  std::vector<PixelCoord> out;
  for (auto [x, y] : disk_pixels(frame.width(), frame.height(), center.u, center.v, radius)) {
    if (is_marker_pixel(frame.at(x, y), params)) out.push_back({x, y});
  }
  return out;
}

namespace {

double dist2(double u0, double v0, double u1, double v1) {
  const double du = u1 - u0, dv = v1 - v0;
  return du * du + dv * dv;
}

Point2 clamp_to(const Image& frame, Point2 p) {
  return {std::clamp(p.u, 0.0, static_cast<double>(frame.width() - 1)),
          std::clamp(p.v, 0.0, static_cast<double>(frame.height() - 1))};
}

}  // namespace

FrameResult track_frame(const TrackState& state, const Image& frame, const TrackerParams& params) {
  const auto detections = detect_marker_pixels(frame, state.position, state.radius, params);
  FrameResult out;
  if (detections.empty()) {
    out.point = state.position;
    out.visible = false;
    out.next = {state.position, std::min(state.radius * params.expansion, params.r_max), true};
    return out;
  }

  const PixelCoord* anchor = &detections.front();
  double best = dist2(state.position.u, state.position.v, anchor->u, anchor->v);
  for (const auto& d : detections) {
    const double dd = dist2(state.position.u, state.position.v, d.u, d.v);
    if (dd < best) {
      best = dd;
      anchor = &d;
    }
  }

  const double r2 = params.averaging_radius * params.averaging_radius;
  double su = 0.0, sv = 0.0;
  int n = 0;
  for (const auto& d : detections) {
    if (dist2(anchor->u, anchor->v, d.u, d.v) <= r2) {
      su += d.u;
      sv += d.v;
      ++n;
    }
  }
  out.point = clamp_to(frame, {su / n, sv / n});
  out.visible = true;
  out.next = {out.point, params.r_default, false};
  return out;
}

Track track_video(const VideoTensor& video, const Query& query, const TrackerParams& params) {
  params.validate();
  if (video.empty()) throw InvalidArgument("track_video: empty video");
  if (query.frame != 0) throw InvalidArgument("track_video: only first-frame queries are supported");
  if (!(query.u >= 0.0 && query.v >= 0.0 && query.u <= video.width() - 1 && query.v <= video.height() - 1))
    throw InvalidArgument("track_video: query outside the frame");

  Track track;
  track.query = query;
  track.height = video.height();
  track.width = video.width();
  track.points.reserve(static_cast<std::size_t>(video.frames()));
  track.points.push_back({query.u, query.v, true});

  TrackState state{{query.u, query.v}, params.r_default, false};
  for (int k = 1; k < video.frames(); ++k) {
    const FrameResult r = track_frame(state, video.frame(k), params);
    track.points.push_back({r.point.u, r.point.v, r.visible});
    state = r.next;
  }
  return track;
}

}  // namespace ctrack
