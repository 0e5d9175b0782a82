#pragma once

#include <cmath>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "ctrack/denoiser.hpp"
#include "ctrack/image.hpp"
#include "ctrack/latent.hpp"
#include "ctrack/tracker.hpp"

namespace ctrack::testing {

inline LatentVideod ramp(const Shape& s, double start = -0.9, double step = 0.013) {
  LatentVideod x(s);
  for (Index i = 0; i < x.size(); ++i) x.data()[i] = start + step * static_cast<double>(i % 137);
  return x;
}

/// Predicts a fixed tensor regardless of input.
class ConstantDenoiser final : public Denoiser<double> {
 public:
  explicit ConstantDenoiser(LatentVideod eps) : eps_(std::move(eps)) {}
  LatentVideod epsilon(const LatentVideod&, int, const Conditioning&) const override { return eps_; }

 private:
  LatentVideod eps_;
};

/// Records the steps it is called at and returns tag-dependent constants.
class RecordingDenoiser final : public Denoiser<double> {
 public:
  RecordingDenoiser(double edited, double unedited) : edited_(edited), unedited_(unedited) {}
  LatentVideod epsilon(const LatentVideod& x, int t, const Conditioning& c) const override {
    steps.push_back(t);
    return LatentVideod::Constant(x.shape(), c.tag == ConditioningTag::edited ? edited_ : unedited_);
  }
  mutable std::vector<int> steps;

 private:
  double edited_, unedited_;
};

class ThrowingDenoiser final : public Denoiser<double> {
 public:
  explicit ThrowingDenoiser(int fail_at) : fail_at_(fail_at) {}
  LatentVideod epsilon(const LatentVideod& x, int t, const Conditioning&) const override {
    if (t == fail_at_) throw DenoiserError("backend exploded", "local");
    return LatentVideod(x.shape());
  }

 private:
  int fail_at_;
};

inline Image solid(int w, int h, Rgb c) { return Image(w, h, c); }

/// Set-based recomputation of the track metrics, used as an oracle.
struct ReferenceMetrics {
  double aj = 0.0;
  double delta_avg = 0.0;
  bool delta_defined = false;
  double oa = 0.0;
};

inline ReferenceMetrics reference_metrics(const std::vector<TrackPoint>& pred, const std::vector<TrackPoint>& gt,
                                          const std::vector<double>& taus) {
  std::set<std::size_t> gv, pv;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (gt[i].visible) gv.insert(i);
    if (pred[i].visible) pv.insert(i);
  }
  ReferenceMetrics r;
  double jsum = 0.0, dsum = 0.0;
  for (double tau : taus) {
    std::set<std::size_t> close;
    for (std::size_t i = 0; i < gt.size(); ++i)
      if (std::hypot(pred[i].u - gt[i].u, pred[i].v - gt[i].v) <= tau) close.insert(i);
    std::size_t tp = 0, fp = 0, fn = 0, hit = 0;
    for (std::size_t i : pv) {
      if (gv.count(i) && close.count(i)) ++tp;
      else ++fp;
    }
    for (std::size_t i : gv) {
      if (!(pv.count(i) && close.count(i))) ++fn;
      if (close.count(i)) ++hit;
    }
    const std::size_t den = tp + fp + fn;
    jsum += den == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(den);
    if (!gv.empty()) dsum += static_cast<double>(hit) / static_cast<double>(gv.size());
  }
  r.aj = jsum / static_cast<double>(taus.size());
  r.delta_defined = !gv.empty();
  r.delta_avg = r.delta_defined ? dsum / static_cast<double>(taus.size()) : 0.0;
  std::size_t agree = 0;
  for (std::size_t i = 0; i < gt.size(); ++i) agree += pred[i].visible == gt[i].visible;
  r.oa = static_cast<double>(agree) / static_cast<double>(gt.size());
  return r;
}

/// Random 256 x 256 instance with clustered errors so every case kind shows up.
inline std::pair<std::vector<TrackPoint>, std::vector<TrackPoint>> random_instance(std::mt19937_64& rng, int frames) {
  std::uniform_real_distribution<double> pos(0.0, 256.0), err(-1.0, 1.0), unit(0.0, 1.0);
  const double scale[] = {0.5, 2.0, 8.0, 30.0};
  std::vector<TrackPoint> pred, gt;
  for (int i = 0; i < frames; ++i) {
    const TrackPoint g{pos(rng), pos(rng), unit(rng) < 0.75};
    const double s = scale[rng() % 4];
    gt.push_back(g);
    pred.push_back({g.u + s * err(rng), g.v + s * err(rng), unit(rng) < 0.75});
  }
  return {pred, gt};
}

}  // namespace ctrack::testing
