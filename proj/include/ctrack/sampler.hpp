#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "ctrack/denoiser.hpp"
#include "ctrack/errors.hpp"
#include "ctrack/latent.hpp"
#include "ctrack/schedule.hpp"

namespace ctrack {

struct SamplerConfig {
  double strength = 0.5;  // gamma
  int steps = 50;         // T
  SigmaMode sigma_mode = SigmaMode::beta;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(strength >= 0.0 && strength <= 1.0)) throw InvalidArgument("SamplerConfig: strength must be in [0,1]");
    if (steps < 1) throw InvalidArgument("SamplerConfig: steps must be >= 1");
  }

  /// t* = floor(gamma * T).
  int start_step() const { return static_cast<int>(std::floor(strength * steps + 1e-9)); }
};

struct GuidanceConfig {
  double lambda = 8.0;

  void validate() const {
    if (!std::isfinite(lambda) || lambda < 0.0) throw InvalidArgument("GuidanceConfig: lambda must be finite and >= 0");
  }
};

/// Independent random streams: `step` feeds the initial noise and the
/// per-step z, `renoise` feeds the re-noised originals of masked sampling.
/// Keeping them apart makes an all-ones mask reproduce unmasked sampling.
struct SamplerStreams {
  explicit SamplerStreams(std::uint64_t seed) : step(seed), renoise(seed ^ 0x9E3779B97F4A7C15ull) {}
  std::mt19937_64 step;
  std::mt19937_64 renoise;
};

// ---------------------------------------------------------------------------
// Single updates

template <typename Scalar>
LatentVideo<Scalar> forward_step(const LatentVideo<Scalar>& x_prev, Scalar alpha, const LatentVideo<Scalar>& noise) {
  require_same_shape(x_prev, noise, "forward_step");
  return LatentVideo<Scalar>(x_prev.shape(),
                             std::sqrt(alpha) * x_prev.array() + std::sqrt(Scalar(1) - alpha) * noise.array());
}

template <typename Scalar>
LatentVideo<Scalar> forward_step(const LatentVideo<Scalar>& x_prev, int t, const NoiseSchedule<Scalar>& schedule,
                                 const LatentVideo<Scalar>& noise) {
  return forward_step(x_prev, schedule.alpha(t), noise);
}

template <typename Scalar>
LatentVideo<Scalar> forward_direct(const LatentVideo<Scalar>& x0, Scalar alpha_bar, const LatentVideo<Scalar>& noise) {
  require_same_shape(x0, noise, "forward_direct");
  if (alpha_bar == Scalar(1)) return x0;
  return LatentVideo<Scalar>(x0.shape(),
                             std::sqrt(alpha_bar) * x0.array() + std::sqrt(Scalar(1) - alpha_bar) * noise.array());
}

/// t in [0, T]; t = 0 returns x0.
template <typename Scalar>
LatentVideo<Scalar> forward_direct(const LatentVideo<Scalar>& x0, int t, const NoiseSchedule<Scalar>& schedule,
                                   const LatentVideo<Scalar>& noise) {
  if (t < 0 || t > schedule.steps())
    throw InvalidArgument("forward_direct: step " + std::to_string(t) + " out of range");
  return forward_direct(x0, schedule.alpha_bar(t), noise);
}

template <typename Scalar, typename Rng>
LatentVideo<Scalar> reverse_step(const LatentVideo<Scalar>& x_t, const LatentVideo<Scalar>& eps_hat,
                                 const StepCoefficients<Scalar>& k, Rng& rng) {
  require_same_shape(x_t, eps_hat, "reverse_step");
  if (!eps_hat.all_finite()) throw NumericError("reverse_step: non-finite noise prediction");
  const Scalar eps_scale = k.beta / std::sqrt(Scalar(1) - k.alpha_bar);
  LatentVideo<Scalar> out(x_t.shape(), (x_t.array() - eps_scale * eps_hat.array()) / std::sqrt(k.alpha));
  if (k.sigma > Scalar(0)) {
    const auto z = LatentVideo<Scalar>::Randn(x_t.shape(), rng);
    out.array() += k.sigma * z.array();
  }
  return out;
}

template <typename Scalar, typename Rng>
LatentVideo<Scalar> reverse_step(const LatentVideo<Scalar>& x_t, int t, const LatentVideo<Scalar>& eps_hat,
                                 const NoiseSchedule<Scalar>& schedule, const SamplerConfig& config, Rng& rng) {
  return reverse_step(x_t, eps_hat, schedule.at(t, config.sigma_mode), rng);
}

/// (lambda + 1) * eps_edited - lambda * eps_unedited.
template <typename Scalar>
LatentVideo<Scalar> guided_epsilon(const LatentVideo<Scalar>& eps_edited, const LatentVideo<Scalar>& eps_unedited,
                                   Scalar lambda) {
  require_same_shape(eps_edited, eps_unedited, "guided_epsilon");
  if (!(lambda >= Scalar(0))) throw InvalidArgument("guided_epsilon: lambda must be >= 0");
  if (lambda == Scalar(0)) return eps_edited;
  return LatentVideo<Scalar>(eps_edited.shape(),
                             (lambda + Scalar(1)) * eps_edited.array() - lambda * eps_unedited.array());
}

/// m ? tentative : original, with the (F, H, W) mask broadcast over channels.
template <typename Scalar>
LatentVideo<Scalar> masked_blend(const SpatioTemporalMask& mask, const LatentVideo<Scalar>& tentative,
                                 const LatentVideo<Scalar>& original) {
  require_same_shape(tentative, original, "masked_blend");
  if (!mask.matches(tentative.shape())) throw InvalidArgument("masked_blend: mask shape mismatch");
  LatentVideo<Scalar> out = original;
  const Index channels = tentative.shape().channels;
  const Scalar* src = tentative.data();
  Scalar* dst = out.data();
  for (Index p = 0; p < mask.size(); ++p) {
    if (!mask.at_flat(p)) continue;
    for (Index c = 0; c < channels; ++c) dst[p * channels + c] = src[p * channels + c];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Chains

namespace detail {

template <typename Scalar>
LatentVideo<Scalar> guided_prediction(const Denoiser<Scalar>& denoiser, const LatentVideo<Scalar>& x, int t,
                                      const Conditioning& edited, const Conditioning& unedited,
                                      const GuidanceConfig& guidance) {
  const std::array<const Conditioning*, 2> conds{&edited, &unedited};
  std::vector<LatentVideo<Scalar>> eps;
  try {
    eps = denoiser.epsilon_batch(x, t, conds);
  } catch (DenoiserError& e) {
    e.set_step(t);
    throw;
  }
  if (eps.size() != 2) throw DenoiserError("denoiser returned " + std::to_string(eps.size()) + " predictions, expected 2");
  require_same_shape(x, eps[0], "denoiser output");
  require_same_shape(x, eps[1], "denoiser output");
  return guided_epsilon(eps[0], eps[1], static_cast<Scalar>(guidance.lambda));
}

/// Reverse chain from x at t_start down to 1. After every step the hook may
/// rewrite the state (identity for plain regeneration).
template <typename Scalar, typename Hook>
LatentVideo<Scalar> run_chain(LatentVideo<Scalar> x, int t_start, const Conditioning& edited,
                              const Conditioning& unedited, const Denoiser<Scalar>& denoiser,
                              const NoiseSchedule<Scalar>& schedule, const SamplerConfig& sampler,
                              const GuidanceConfig& guidance, SamplerStreams& streams, Hook&& after_step) {
  for (int t = t_start; t >= 1; --t) {
    const auto eps = guided_prediction(denoiser, x, t, edited, unedited, guidance);
    x = reverse_step(x, t, eps, schedule, sampler, streams.step);
    after_step(x, t - 1);
  }
  return x;
}

template <typename Scalar>
void check_chain_inputs(const NoiseSchedule<Scalar>& schedule, const SamplerConfig& sampler,
                        const GuidanceConfig& guidance) {
  sampler.validate();
  guidance.validate();
  if (sampler.steps != schedule.steps()) throw InvalidArgument("sampler steps do not match the schedule length");
}

}  // namespace detail

/// Partial-noise regeneration: noise x0 to t* = floor(gamma T), then run the
/// guided reverse chain back to a clean sample.
template <typename Scalar>
LatentVideo<Scalar> sdedit_regenerate(const LatentVideo<Scalar>& x0, const Conditioning& edited,
                                      const Conditioning& unedited, const Denoiser<Scalar>& denoiser,
                                      const NoiseSchedule<Scalar>& schedule, const SamplerConfig& sampler,
                                      const GuidanceConfig& guidance, SamplerStreams& streams) {
  detail::check_chain_inputs(schedule, sampler, guidance);
  const int t_start = sampler.start_step();
  if (t_start == 0) return x0;
  const auto noise = LatentVideo<Scalar>::Randn(x0.shape(), streams.step);
  auto x = forward_direct(x0, t_start, schedule, noise);
  return detail::run_chain(std::move(x), t_start, edited, unedited, denoiser, schedule, sampler, guidance, streams,
                           [](LatentVideo<Scalar>&, int) {});
}

template <typename Scalar>
LatentVideo<Scalar> sdedit_regenerate(const LatentVideo<Scalar>& x0, const Conditioning& edited,
                                      const Conditioning& unedited, const Denoiser<Scalar>& denoiser,
                                      const NoiseSchedule<Scalar>& schedule, const SamplerConfig& sampler,
                                      const GuidanceConfig& guidance) {
  SamplerStreams streams(sampler.seed);
  return sdedit_regenerate(x0, edited, unedited, denoiser, schedule, sampler, guidance, streams);
}

/// Mask-constrained regeneration: after each reverse step, cells outside the
/// mask are replaced by x0 re-noised to the new level. At termination those
/// cells equal x0 exactly.
template <typename Scalar>
LatentVideo<Scalar> inpaint_regenerate(const LatentVideo<Scalar>& x0, const SpatioTemporalMask& mask,
                                       const Conditioning& edited, const Conditioning& unedited,
                                       const Denoiser<Scalar>& denoiser, const NoiseSchedule<Scalar>& schedule,
                                       const SamplerConfig& sampler, const GuidanceConfig& guidance,
                                       SamplerStreams& streams) {
  detail::check_chain_inputs(schedule, sampler, guidance);
  if (!mask.matches(x0.shape())) throw InvalidArgument("inpaint_regenerate: mask shape mismatch");
  const int t_start = sampler.start_step();
  if (t_start == 0) return x0;
  const auto noise = LatentVideo<Scalar>::Randn(x0.shape(), streams.step);
  auto x = forward_direct(x0, t_start, schedule, noise);
  return detail::run_chain(std::move(x), t_start, edited, unedited, denoiser, schedule, sampler, guidance, streams,
                           [&](LatentVideo<Scalar>& state, int t_prev) {
                             const auto eps = LatentVideo<Scalar>::Randn(x0.shape(), streams.renoise);
                             state = masked_blend(mask, state, forward_direct(x0, t_prev, schedule, eps));
                           });
}

template <typename Scalar>
LatentVideo<Scalar> inpaint_regenerate(const LatentVideo<Scalar>& x0, const SpatioTemporalMask& mask,
                                       const Conditioning& edited, const Conditioning& unedited,
                                       const Denoiser<Scalar>& denoiser, const NoiseSchedule<Scalar>& schedule,
                                       const SamplerConfig& sampler, const GuidanceConfig& guidance) {
  SamplerStreams streams(sampler.seed);
  return inpaint_regenerate(x0, mask, edited, unedited, denoiser, schedule, sampler, guidance, streams);
}

/// Full reverse chain from x_T ~ N(0, I).
template <typename Scalar>
LatentVideo<Scalar> sample_from_noise(const Shape& shape, const Conditioning& edited, const Conditioning& unedited,
                                      const Denoiser<Scalar>& denoiser, const NoiseSchedule<Scalar>& schedule,
                                      const SamplerConfig& sampler, const GuidanceConfig& guidance,
                                      SamplerStreams& streams) {
  detail::check_chain_inputs(schedule, sampler, guidance);
  auto x = LatentVideo<Scalar>::Randn(shape, streams.step);
  return detail::run_chain(std::move(x), schedule.steps(), edited, unedited, denoiser, schedule, sampler, guidance,
                           streams, [](LatentVideo<Scalar>&, int) {});
}

}  // namespace ctrack
