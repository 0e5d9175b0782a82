#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "ctrack/denoiser.hpp"
#include "ctrack/schedule.hpp"

namespace ctrack {

/// Integer translation applied to one frame's content.
struct FrameShift {
  int dx = 0;
  int dy = 0;
  bool operator==(const FrameShift&) const = default;
};

/// Models a generator that drifts frames out of alignment unless the state
/// pins them down. Per frame the oracle predicts toward the shifted target
/// while  D(shifted) - D(aligned) < prior_strength * E, where D is the mean
/// squared residual of x_t against sqrt(abar) * target and E the mean squared
/// difference between the aligned and shifted targets. A freely regenerated
/// state settles into the shifted target; a state whose bulk is held at the
/// aligned original (masked sampling) flips back once abar grows.
struct DriftModel {
  std::vector<FrameShift> shifts;
  double prior_strength = 0.3;
};

/// Content of frame f moved by shifts[f], edges clamped.
template <typename Scalar>
LatentVideo<Scalar> shift_frames(const LatentVideo<Scalar>& in, const std::vector<FrameShift>& shifts) {
  const Shape& s = in.shape();
  if (static_cast<Index>(shifts.size()) != s.frames) throw InvalidArgument("shift_frames: one shift per frame required");
  LatentVideo<Scalar> out(s);
  for (Index f = 0; f < s.frames; ++f) {
    const auto& sh = shifts[static_cast<std::size_t>(f)];
    for (Index y = 0; y < s.height; ++y) {
      const Index sy = std::clamp<Index>(y - sh.dy, 0, s.height - 1);
      for (Index x = 0; x < s.width; ++x) {
        const Index sx = std::clamp<Index>(x - sh.dx, 0, s.width - 1);
        for (Index c = 0; c < s.channels; ++c) out(f, y, x, c) = in(f, sy, sx, c);
      }
    }
  }
  return out;
}

/// Denoiser whose clean targets are known by construction.
///
/// The edited conditioning selects the target that carries the marker along
/// its ground-truth trajectory; the unedited one selects the marker-free
/// video. With contamination w > 0 the edited prediction is mixed with the
/// marker-free one, (1 - w) eps_marker + w eps_plain, which stands in for a
/// strong prior that ignores the inserted marker.
template <typename Scalar>
class TrajectoryOracleDenoiser final : public Denoiser<Scalar> {
 public:
  using Latent = LatentVideo<Scalar>;

  TrajectoryOracleDenoiser(Latent target_with_marker, Latent target_without_marker, NoiseSchedule<Scalar> schedule,
                           double contamination = 0.0, std::optional<DriftModel> drift = std::nullopt)
      : with_marker_(std::move(target_with_marker)),
        without_marker_(std::move(target_without_marker)),
        schedule_(std::move(schedule)),
        contamination_(contamination),
        drift_(std::move(drift)) {
    require_same_shape(with_marker_, without_marker_, "TrajectoryOracleDenoiser");
    if (!(contamination_ >= 0.0 && contamination_ < 1.0))
      throw InvalidArgument("TrajectoryOracleDenoiser: contamination must be in [0,1)");
    if (drift_) {
      shifted_with_ = shift_frames(with_marker_, drift_->shifts);
      shifted_without_ = shift_frames(without_marker_, drift_->shifts);
    }
  }

  Latent epsilon(const Latent& x_t, int t, const Conditioning& c) const override {
    const Conditioning* one[] = {&c};
    return std::move(epsilon_batch(x_t, t, one).front());
  }

  std::vector<Latent> epsilon_batch(const Latent& x_t, int t,
                                    std::span<const Conditioning* const> conditionings) const override {
    require_same_shape(x_t, with_marker_, "TrajectoryOracleDenoiser");
    const Scalar abar = schedule_.alpha_bar(t);
    const std::vector<bool> drifted = drift_choice(x_t, abar);
    std::vector<Latent> out;
    out.reserve(conditionings.size());
    for (const Conditioning* c : conditionings) {
      switch (c->tag) {
        case ConditioningTag::edited: {
          Latent eps = predict(x_t, abar, with_marker_, shifted_with_, drifted);
          if (contamination_ > 0.0) {
            const Latent plain = predict(x_t, abar, without_marker_, shifted_without_, drifted);
            const Scalar w = static_cast<Scalar>(contamination_);
            eps.array() = (Scalar(1) - w) * eps.array() + w * plain.array();
          }
          out.push_back(std::move(eps));
          break;
        }
        case ConditioningTag::unedited:
          out.push_back(predict(x_t, abar, without_marker_, shifted_without_, drifted));
          break;
        default:
          throw InvalidArgument("TrajectoryOracleDenoiser: unknown conditioning tag");
      }
    }
    return out;
  }

  /// Frames predicted toward the shifted target for state x_t at step t.
  std::vector<bool> drifted_frames(const Latent& x_t, int t) const { return drift_choice(x_t, schedule_.alpha_bar(t)); }

 private:
  // (x_t - sqrt(abar) target) / sqrt(1 - abar), target picked per frame.
  Latent predict(const Latent& x_t, Scalar abar, const Latent& aligned, const Latent& shifted,
                 const std::vector<bool>& drifted) const {
    const Scalar ra = std::sqrt(abar);
    const Scalar rn = std::sqrt(Scalar(1) - abar);
    Latent out(x_t.shape());
    const Index per_frame = x_t.shape().height * x_t.shape().width * x_t.shape().channels;
    for (Index f = 0; f < x_t.shape().frames; ++f) {
      const Latent& target = (drift_ && drifted[static_cast<std::size_t>(f)]) ? shifted : aligned;
      out.array().segment(f * per_frame, per_frame) =
          (x_t.array().segment(f * per_frame, per_frame) - ra * target.array().segment(f * per_frame, per_frame)) / rn;
    }
    return out;
  }

  std::vector<bool> drift_choice(const Latent& x_t, Scalar abar) const {
    const auto frames = static_cast<std::size_t>(x_t.shape().frames);
    std::vector<bool> drifted(frames, false);
    if (!drift_) return drifted;
    const Scalar ra = std::sqrt(abar);
    const Index per_frame = x_t.shape().height * x_t.shape().width * x_t.shape().channels;
    for (std::size_t f = 0; f < frames; ++f) {
      const Index off = static_cast<Index>(f) * per_frame;
      const auto xs = x_t.array().segment(off, per_frame);
      const auto aligned = without_marker_.array().segment(off, per_frame);
      const auto shifted = shifted_without_.array().segment(off, per_frame);
      const Scalar energy = (aligned - shifted).square().mean();
      if (!(energy > Scalar(0))) continue;
      const Scalar d_aligned = (xs - ra * aligned).square().mean();
      const Scalar d_shifted = (xs - ra * shifted).square().mean();
      drifted[f] = (d_shifted - d_aligned) < static_cast<Scalar>(drift_->prior_strength) * energy;
    }
    return drifted;
  }

  Latent with_marker_;
  Latent without_marker_;
  NoiseSchedule<Scalar> schedule_;
  double contamination_;
  std::optional<DriftModel> drift_;
  Latent shifted_with_;
  Latent shifted_without_;
};

}  // namespace ctrack
