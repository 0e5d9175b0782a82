#include "ctrack/codec.hpp"

#include <algorithm>

namespace ctrack {

SpatioTemporalMask pool_mask(const SpatioTemporalMask& pixel_mask, int spatial_factor, int temporal_factor) {
  if (spatial_factor < 1 || temporal_factor < 1) throw InvalidArgument("pool_mask: factors must be >= 1");
  const Index frames = pixel_mask.frames();
  const Index latent_frames =
      temporal_factor == 1 || frames == 0 ? frames : 1 + (frames - 1 + temporal_factor - 1) / temporal_factor;
  const Index lh = (pixel_mask.height() + spatial_factor - 1) / spatial_factor;
  const Index lw = (pixel_mask.width() + spatial_factor - 1) / spatial_factor;
  SpatioTemporalMask out(latent_frames, lh, lw);

  for (Index f = 0; f < frames; ++f) {
    const Index lf = temporal_factor == 1 || f == 0 ? f : 1 + (f - 1) / temporal_factor;
    for (Index y = 0; y < pixel_mask.height(); ++y) {
      for (Index x = 0; x < pixel_mask.width(); ++x) {
        if (pixel_mask(f, y, x)) out.set(lf, y / spatial_factor, x / spatial_factor, true);
      }
    }
  }
  return out;
}

}  // namespace ctrack
