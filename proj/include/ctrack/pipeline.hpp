#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "ctrack/codec.hpp"
#include "ctrack/denoiser.hpp"
#include "ctrack/refinement.hpp"
#include "ctrack/remote.hpp"
#include "ctrack/sampler.hpp"
#include "ctrack/schedule.hpp"
#include "ctrack/tracker.hpp"
#include "ctrack/video_prep.hpp"

namespace ctrack {

struct ScheduleConfig {
  double beta_start = 1e-4;  // for a 1000-step chain, rescaled by 1000/T
  double beta_end = 0.02;
};

enum class BackendKind { analytic, oracle, remote };

struct BackendConfig {
  BackendKind kind = BackendKind::oracle;
  std::string url;
  int timeout_ms = 30000;
  int retries = 2;
  double analytic_sigma = 0.5;
  double contamination = 0.0;
  bool drift = false;
  int drift_pixels = 3;
  double drift_prior = 0.3;
  std::uint64_t drift_seed = 0;
};

struct PipelineConfig {
  BackendConfig backend;
  ScheduleConfig schedule;
  SamplerConfig sampler;
  GuidanceConfig guidance;
  MarkerSpec marker;  // hue and radius; the position comes from the query
  bool rebalance = true;
  RebalanceParams rebalance_params;
  TrackerParams tracker;
  bool scale_tracker = true;
  RefinementParams refinement;
  int workers = 1;

  void validate() const;
  NoiseSchedule<double> make_schedule() const;
  /// Tracker and refinement parameters at the given generation resolution.
  TrackerParams effective_tracker(int height, int width) const;
  RefinementParams effective_refinement(int height, int width) const;
};

/// Everything derived from the input before sampling. `plain` is the
/// rebalanced, padded video without any marker; `prepared` is the same with
/// the marker drawn into frame 0.
struct PreparedVideo {
  VideoTensor plain;
  VideoTensor prepared;
  int original_length = 0;
  Query query;
  MarkerSpec marker;
  Conditioning edited;
  Conditioning unedited;
};

PreparedVideo prepare_video(const VideoTensor& video, const Query& query, const PipelineConfig& config);

using DenoiserFactory =
    std::function<std::unique_ptr<Denoiser<double>>(const PreparedVideo&, const NoiseSchedule<double>&)>;

/// Trajectory oracle that carries the marker along gt (in the video's pixel
/// frame). coverage, when given, hides the marker under occluders.
DenoiserFactory oracle_factory(Track gt, std::optional<SpatioTemporalMask> coverage, const BackendConfig& backend);
/// Gaussian data model centered on the prepared video.
DenoiserFactory analytic_factory(double sigma);
DenoiserFactory remote_factory(const RemoteOptions& options);

struct QueryResult {
  Track coarse;
  Track refined;
  VideoTensor generated;
};

/// One query point on one video: prepare, regenerate, track, refine.
class PointPromptingSession final : public MaskedRegenerator {
 public:
  PointPromptingSession(const VideoTensor& video, const Query& query, const PipelineConfig& config,
                        const DenoiserFactory& factory, std::shared_ptr<const LatentCodec<double>> codec = nullptr);

  VideoTensor regenerate() const;
  VideoTensor regenerate_masked(const SpatioTemporalMask& pixel_mask) const override;

  const PreparedVideo& prepared() const { return prepared_; }
  const TrackerParams& tracker_params() const { return tracker_; }
  const RefinementParams& refinement_params() const { return refinement_; }

  QueryResult run() const;

 private:
  VideoTensor finish(const LatentVideo<double>& latent) const;

  PipelineConfig config_;
  PreparedVideo prepared_;
  NoiseSchedule<double> schedule_;
  std::unique_ptr<Denoiser<double>> denoiser_;
  std::shared_ptr<const LatentCodec<double>> codec_;
  LatentVideo<double> x0_;
  TrackerParams tracker_;
  RefinementParams refinement_;
};

QueryResult track_query(const VideoTensor& video, const Query& query, const PipelineConfig& config,
                        const DenoiserFactory& factory, std::shared_ptr<const LatentCodec<double>> codec = nullptr);

}  // namespace ctrack
