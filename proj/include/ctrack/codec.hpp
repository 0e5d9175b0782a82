#pragma once

#include "ctrack/latent.hpp"

namespace ctrack {

/// Pixel video <-> sampler latent. The temporal layout follows causal video
/// VAEs: latent frame 0 covers pixel frame 0, latent frame j >= 1 covers
/// pixel frames (j-1)*tf + 1 .. j*tf.
template <typename Scalar>
class LatentCodec {
 public:
  virtual ~LatentCodec() = default;
  virtual LatentVideo<Scalar> encode(const LatentVideo<Scalar>& pixels) const = 0;
  virtual LatentVideo<Scalar> decode(const LatentVideo<Scalar>& latent, const Shape& pixel_shape) const = 0;
  virtual int spatial_factor() const { return 1; }
  virtual int temporal_factor() const { return 1; }
};

template <typename Scalar>
class IdentityCodec final : public LatentCodec<Scalar> {
 public:
  LatentVideo<Scalar> encode(const LatentVideo<Scalar>& pixels) const override { return pixels; }
  LatentVideo<Scalar> decode(const LatentVideo<Scalar>& latent, const Shape& pixel_shape) const override {
    if (!(latent.shape() == pixel_shape)) throw InvalidArgument("IdentityCodec: shape mismatch");
    return latent;
  }
};

/// Latent-resolution mask; a latent cell is free if any pixel it covers is.
SpatioTemporalMask pool_mask(const SpatioTemporalMask& pixel_mask, int spatial_factor, int temporal_factor);

}  // namespace ctrack
