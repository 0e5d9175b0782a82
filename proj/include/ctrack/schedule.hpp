#pragma once

#include <Eigen/Core>

#include <cmath>
#include <string>
#include <vector>

#include "ctrack/errors.hpp"

namespace ctrack {

enum class SigmaMode { beta, beta_tilde };

/// Scalars needed by one forward or reverse update. Kept separate from the
/// schedule so single updates can be exercised with arbitrary coefficients.
template <typename Scalar>
struct StepCoefficients {
  Scalar alpha;
  Scalar beta;
  Scalar alpha_bar;
  Scalar alpha_bar_prev;
  Scalar sigma;
};

/// Variance schedule over steps t = 1..T. alpha_bar(0) is 1 by definition.
template <typename Scalar>
class NoiseSchedule {
 public:
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  static NoiseSchedule from_betas(const Array& betas) {
    if (betas.size() < 1) throw InvalidArgument("NoiseSchedule: need at least one step");
    for (Eigen::Index i = 0; i < betas.size(); ++i) {
      if (!(betas[i] > Scalar(0) && betas[i] < Scalar(1)))
        throw InvalidArgument("NoiseSchedule: beta[" + std::to_string(i + 1) + "] outside (0,1)");
    }
    NoiseSchedule s;
    s.betas_ = betas;
    s.alphas_ = Scalar(1) - betas;
    s.alpha_bars_.resize(betas.size());
    Scalar acc = Scalar(1);
    for (Eigen::Index i = 0; i < betas.size(); ++i) {
      acc *= s.alphas_[i];
      s.alpha_bars_[i] = acc;
    }
    return s;
  }

  static NoiseSchedule from_betas(const std::vector<Scalar>& betas) {
    return from_betas(Eigen::Map<const Array>(betas.data(), static_cast<Eigen::Index>(betas.size())));
  }

  /// Linear betas between start and end, both given for a 1000-step chain
  /// and rescaled by 1000/T.
  static NoiseSchedule linear(int steps, double beta_start = 1e-4, double beta_end = 0.02) {
    if (steps < 1) throw InvalidArgument("NoiseSchedule: steps must be >= 1");
    const double scale = 1000.0 / steps;
    const Array betas = Array::LinSpaced(steps, Scalar(beta_start * scale), Scalar(beta_end * scale));
    return from_betas(betas);
  }

  int steps() const { return static_cast<int>(betas_.size()); }

  Scalar beta(int t) const { return betas_[checked(t)]; }
  Scalar alpha(int t) const { return alphas_[checked(t)]; }
  Scalar alpha_bar(int t) const {
    if (t == 0) return Scalar(1);
    return alpha_bars_[checked(t)];
  }

  /// Reverse-step standard deviation. Zero at t = 1 so the chain ends on the
  /// posterior mean.
  Scalar sigma(int t, SigmaMode mode) const {
    if (t == 1) return Scalar(0);
    const Scalar b = beta(t);
    if (mode == SigmaMode::beta) return std::sqrt(b);
    return std::sqrt((Scalar(1) - alpha_bar(t - 1)) / (Scalar(1) - alpha_bar(t)) * b);
  }

  StepCoefficients<Scalar> at(int t, SigmaMode mode) const {
    return {alpha(t), beta(t), alpha_bar(t), alpha_bar(t - 1), sigma(t, mode)};
  }

  const Array& betas() const { return betas_; }
  const Array& alphas() const { return alphas_; }
  const Array& alpha_bars() const { return alpha_bars_; }

 private:
  Eigen::Index checked(int t) const {
    if (t < 1 || t > steps())
      throw InvalidArgument("NoiseSchedule: step " + std::to_string(t) + " outside [1," + std::to_string(steps()) + "]");
    return t - 1;
  }

  Array betas_;
  Array alphas_;
  Array alpha_bars_;
};

}  // namespace ctrack
