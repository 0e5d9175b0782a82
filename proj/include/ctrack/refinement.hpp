#pragma once

#include "ctrack/image.hpp"
#include "ctrack/latent.hpp"
#include "ctrack/tracker.hpp"

namespace ctrack {

struct RefinementParams {
  double tube_radius = 40.0;  // pixels at a 480-row generation frame
  int rounds = 1;

  void validate(double marker_radius) const;
  /// tube_radius rescaled by min(height, width) / 480.
  RefinementParams scaled_for(int height, int width) const;
};

/// Frame k is free inside the disk of the given radius around track point k
/// (held positions included), clipped to the frame.
SpatioTemporalMask build_mask(const Track& track, double radius, int frames, int height, int width);

/// Reruns generation with everything outside a pixel mask frozen to the
/// input video.
class MaskedRegenerator {
 public:
  virtual ~MaskedRegenerator() = default;
  virtual VideoTensor regenerate_masked(const SpatioTemporalMask& pixel_mask) const = 0;
};

/// Coarse-to-fine correction: tube mask around the latest track, masked
/// regeneration, re-track. Repeated `rounds` times; rounds = 0 returns the
/// initial track.
Track refine_track(const Track& initial, const MaskedRegenerator& regenerator, const TrackerParams& tracker,
                   const RefinementParams& params);

}  // namespace ctrack
