#pragma once

#include <cmath>

#include "ctrack/denoiser.hpp"
#include "ctrack/schedule.hpp"

namespace ctrack {

/// Closed-form optimal noise predictor for data ~ N(mu, sigma^2 I):
///   eps = sqrt(1 - abar) (x_t - sqrt(abar) mu) / (abar sigma^2 + 1 - abar).
/// Conditioning is ignored.
template <typename Scalar>
class AnalyticGaussianDenoiser final : public Denoiser<Scalar> {
 public:
  using Latent = LatentVideo<Scalar>;

  AnalyticGaussianDenoiser(Latent mu, Scalar sigma, NoiseSchedule<Scalar> schedule)
      : mu_(std::move(mu)), sigma_(sigma), schedule_(std::move(schedule)) {
    if (!(sigma_ >= Scalar(0)) || !std::isfinite(sigma_)) throw InvalidArgument("AnalyticGaussianDenoiser: bad sigma");
    if (!mu_.all_finite()) throw InvalidArgument("AnalyticGaussianDenoiser: non-finite mean");
  }

  Latent epsilon(const Latent& x_t, int t, const Conditioning&) const override {
    require_same_shape(x_t, mu_, "AnalyticGaussianDenoiser");
    const Scalar abar = schedule_.alpha_bar(t);
    const Scalar denom = abar * sigma_ * sigma_ + Scalar(1) - abar;
    return Latent(x_t.shape(), std::sqrt(Scalar(1) - abar) * (x_t.array() - std::sqrt(abar) * mu_.array()) / denom);
  }

  const Latent& mean() const { return mu_; }
  Scalar sigma() const { return sigma_; }

 private:
  Latent mu_;
  Scalar sigma_;
  NoiseSchedule<Scalar> schedule_;
};

}  // namespace ctrack
