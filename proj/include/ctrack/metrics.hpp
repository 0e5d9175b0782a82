#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ctrack/tracker.hpp"

namespace ctrack {

inline constexpr int kEvalResolution = 256;

std::vector<double> default_thresholds();

/// Coordinates scaled per axis into a to_height x to_width frame.
Track rescale_track(const Track& track, int to_height = kEvalResolution, int to_width = kEvalResolution);

struct PositionalAccuracy {
  std::vector<double> thresholds;
  std::vector<double> deltas;
  double delta_avg = 0.0;
};

/// Fraction of gt-visible frames whose prediction lies within distance <= tau,
/// per threshold. nullopt when no frame is gt-visible.
std::optional<PositionalAccuracy> positional_accuracy(std::span<const TrackPoint> pred,
                                                      std::span<const TrackPoint> gt,
                                                      std::span<const double> thresholds);

double occlusion_accuracy(std::span<const TrackPoint> pred, std::span<const TrackPoint> gt);

struct JaccardCounts {
  int true_positives = 0;
  int false_positives = 0;
  int false_negatives = 0;
};

/// Counts at one threshold.
///   TP: gt visible, pred visible, distance <= tau
///   FP: pred visible and (gt occluded or distance > tau)
///   FN: gt visible and (pred occluded or distance > tau)
/// A visible prediction too far from a visible gt point counts as both FP
/// and FN.
JaccardCounts jaccard_counts(std::span<const TrackPoint> pred, std::span<const TrackPoint> gt, double tau);

/// TP / (TP + FP + FN); 1 when the denominator is 0.
double jaccard(const JaccardCounts& counts);

struct AverageJaccard {
  std::vector<double> jaccards;
  std::vector<JaccardCounts> counts;
  double aj = 0.0;
};

AverageJaccard average_jaccard(std::span<const TrackPoint> pred, std::span<const TrackPoint> gt,
                               std::span<const double> thresholds);

struct MetricsReport {
  double aj = 0.0;
  std::optional<double> delta_avg;
  std::vector<double> thresholds;
  std::vector<double> deltas;  // empty when delta_avg is not applicable
  std::vector<double> jaccards;
  std::vector<JaccardCounts> counts;
  double oa = 0.0;
};

/// Both tracks are rescaled into the 256 x 256 evaluation frame first.
MetricsReport evaluate_track(const Track& pred, const Track& gt,
                             std::span<const double> thresholds = default_thresholds());

}  // namespace ctrack
