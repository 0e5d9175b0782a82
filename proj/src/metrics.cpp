#include "ctrack/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ctrack/errors.hpp"

namespace ctrack {

std::vector<double> default_thresholds() { return {1.0, 2.0, 4.0, 8.0, 16.0}; }

Track rescale_track(const Track& track, int to_height, int to_width) {
  if (track.height <= 0 || track.width <= 0 || to_height <= 0 || to_width <= 0)
    throw InvalidArgument("rescale_track: resolutions must be positive");
  const double su = static_cast<double>(to_width) / track.width;
  const double sv = static_cast<double>(to_height) / track.height;
  Track out = track;
  out.height = to_height;
  out.width = to_width;
  out.query.u *= su;
  out.query.v *= sv;
  for (auto& p : out.points) {
    p.u *= su;
    p.v *= sv;
  }
  return out;
}

namespace {

void require_equal_lengths(std::span<const TrackPoint> pred, std::span<const TrackPoint> gt, const char* where) {
  if (pred.size() != gt.size()) throw InvalidArgument(std::string(where) + ": prediction and ground truth lengths differ");
}

bool within(const TrackPoint& a, const TrackPoint& b, double tau) {
  const double du = a.u - b.u, dv = a.v - b.v;
  return du * du + dv * dv <= tau * tau;
}

}  // namespace

std::optional<PositionalAccuracy> positional_accuracy(std::span<const TrackPoint> pred,
                                                      std::span<const TrackPoint> gt,
                                                      std::span<const double> thresholds) {
  require_equal_lengths(pred, gt, "positional_accuracy");
  const auto visible = std::count_if(gt.begin(), gt.end(), [](const TrackPoint& p) { return p.visible; });
  if (visible == 0 || thresholds.empty()) return std::nullopt;

  PositionalAccuracy out;
  out.thresholds.assign(thresholds.begin(), thresholds.end());
  for (double tau : thresholds) {
    int hits = 0;
    for (std::size_t i = 0; i < gt.size(); ++i) {
      if (gt[i].visible && within(pred[i], gt[i], tau)) ++hits;
    }
    out.deltas.push_back(static_cast<double>(hits) / static_cast<double>(visible));
  }
  out.delta_avg = std::accumulate(out.deltas.begin(), out.deltas.end(), 0.0) / static_cast<double>(out.deltas.size());
  return out;
}

double occlusion_accuracy(std::span<const TrackPoint> pred, std::span<const TrackPoint> gt) {
  require_equal_lengths(pred, gt, "occlusion_accuracy");
  if (gt.empty()) throw InvalidArgument("occlusion_accuracy: empty track");
  int agree = 0;
  for (std::size_t i = 0; i < gt.size(); ++i) agree += pred[i].visible == gt[i].visible ? 1 : 0;
  return static_cast<double>(agree) / static_cast<double>(gt.size());
}

JaccardCounts jaccard_counts(std::span<const TrackPoint> pred, std::span<const TrackPoint> gt, double tau) {
  require_equal_lengths(pred, gt, "jaccard_counts");
  JaccardCounts c;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const bool close = within(pred[i], gt[i], tau);
    if (gt[i].visible && pred[i].visible && close) {
      ++c.true_positives;
      continue;
    }
    if (pred[i].visible) ++c.false_positives;
    if (gt[i].visible) ++c.false_negatives;
  }
  return c;
}

double jaccard(const JaccardCounts& c) {
  const int denom = c.true_positives + c.false_positives + c.false_negatives;
  if (denom == 0) return 1.0;
  return static_cast<double>(c.true_positives) / denom;
}

AverageJaccard average_jaccard(std::span<const TrackPoint> pred, std::span<const TrackPoint> gt,
                               std::span<const double> thresholds) {
  if (thresholds.empty()) throw InvalidArgument("average_jaccard: no thresholds");
  AverageJaccard out;
  for (double tau : thresholds) {
    out.counts.push_back(jaccard_counts(pred, gt, tau));
    out.jaccards.push_back(jaccard(out.counts.back()));
  }
  out.aj = std::accumulate(out.jaccards.begin(), out.jaccards.end(), 0.0) / static_cast<double>(out.jaccards.size());
  return out;
}

MetricsReport evaluate_track(const Track& pred, const Track& gt, std::span<const double> thresholds) {
  const Track p = rescale_track(pred);
  const Track g = rescale_track(gt);
  MetricsReport report;
  report.thresholds.assign(thresholds.begin(), thresholds.end());
  if (auto pa = positional_accuracy(p.points, g.points, thresholds)) {
    report.delta_avg = pa->delta_avg;
    report.deltas = pa->deltas;
  }
  auto aj = average_jaccard(p.points, g.points, thresholds);
  report.aj = aj.aj;
  report.jaccards = std::move(aj.jaccards);
  report.counts = std::move(aj.counts);
  report.oa = occlusion_accuracy(p.points, g.points);
  return report;
}

}  // namespace ctrack
