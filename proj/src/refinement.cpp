#include "ctrack/refinement.hpp"

#include <algorithm>
#include <cmath>

#include "ctrack/video_prep.hpp"

namespace ctrack {

void RefinementParams::validate(double marker_radius) const {
  if (!(tube_radius > marker_radius)) throw InvalidArgument("RefinementParams: tube radius must exceed the marker radius");
  if (rounds < 0) throw InvalidArgument("RefinementParams: rounds must be >= 0");
}

RefinementParams RefinementParams::scaled_for(int height, int width) const {
  RefinementParams out = *this;
  out.tube_radius = tube_radius * std::min(height, width) / 480.0;
  return out;
}

SpatioTemporalMask build_mask(const Track& track, double radius, int frames, int height, int width) {
  if (track.length() != frames) throw InvalidArgument("build_mask: track length differs from frame count");
  if (!(radius >= 0.0)) throw InvalidArgument("build_mask: radius must be >= 0");
  SpatioTemporalMask mask(frames, height, width);
  for (int k = 0; k < frames; ++k) {
    const auto& p = track.points[static_cast<std::size_t>(k)];
    for (auto [x, y] : disk_pixels(width, height, p.u, p.v, radius)) mask.set(k, y, x, true);
  }
  return mask;
}

Track refine_track(const Track& initial, const MaskedRegenerator& regenerator, const TrackerParams& tracker,
                   const RefinementParams& params) {
  if (params.rounds < 0) throw InvalidArgument("refine_track: rounds must be >= 0");
  Track current = initial;
  for (int round = 0; round < params.rounds; ++round) {
    const auto mask = build_mask(current, params.tube_radius, current.length(), current.height, current.width);
    const VideoTensor video = regenerator.regenerate_masked(mask);
    Track next = track_video(video, current.query, tracker);
    next.video_id = initial.video_id;
    current = std::move(next);
  }
  return current;
}

}  // namespace ctrack
