#include "ctrack/pipeline.hpp"

#include "ctrack/analytic_denoiser.hpp"
#include "ctrack/errors.hpp"
#include "ctrack/oracle_denoiser.hpp"
#include "ctrack/synthetic.hpp"

namespace ctrack {

void PipelineConfig::validate() const {
  sampler.validate();
  guidance.validate();
  marker.validate();
  rebalance_params.validate();
  tracker.validate();
  refinement.validate(marker.radius);
  if (workers < 1) throw InvalidArgument("workers must be >= 1");
  if (!(schedule.beta_start > 0.0 && schedule.beta_start <= schedule.beta_end))
    throw InvalidArgument("schedule: need 0 < beta_start <= beta_end");
  if (backend.kind == BackendKind::remote && backend.url.empty())
    throw InvalidArgument("backend: remote backend needs a url");
  if (backend.timeout_ms <= 0) throw InvalidArgument("backend: timeout must be positive");
  if (backend.retries < 0) throw InvalidArgument("backend: retries must be >= 0");
  if (!(backend.contamination >= 0.0 && backend.contamination < 1.0))
    throw InvalidArgument("backend: contamination must be in [0,1)");
  if (!(backend.analytic_sigma >= 0.0)) throw InvalidArgument("backend: analytic sigma must be >= 0");
  if (backend.drift_pixels < 0) throw InvalidArgument("backend: drift pixels must be >= 0");
}

NoiseSchedule<double> PipelineConfig::make_schedule() const {
  return NoiseSchedule<double>::linear(sampler.steps, schedule.beta_start, schedule.beta_end);
}

TrackerParams PipelineConfig::effective_tracker(int height, int width) const {
  TrackerParams t = tracker;
  t.marker_hue = marker.hue;
  return scale_tracker ? t.scaled_for(height, width, marker.radius) : t;
}

RefinementParams PipelineConfig::effective_refinement(int height, int width) const {
  RefinementParams r = scale_tracker ? refinement.scaled_for(height, width) : refinement;
  r.validate(marker.radius);
  return r;
}

PreparedVideo prepare_video(const VideoTensor& video, const Query& query, const PipelineConfig& config) {
  if (video.empty()) throw InvalidArgument("prepare_video: empty video");
  if (query.frame != 0) throw InvalidArgument("prepare_video: only first-frame queries are supported");
  PreparedVideo out;
  out.marker = config.marker;
  out.marker.u = query.u;
  out.marker.v = query.v;
  out.marker.frame = 0;
  out.query = query;

  RebalanceParams rp = config.rebalance_params;
  rp.marker_hue = config.marker.hue;
  const VideoTensor balanced = config.rebalance ? rebalance_colors(video, rp) : video;
  PaddedVideo padded = pad_video(balanced);
  out.original_length = padded.original_length;
  out.plain = std::move(padded.video);
  out.prepared = out.plain;
  out.prepared.frame(0) = insert_marker(out.plain.frame(0), out.marker);
  out.edited = {out.prepared.frame(0), ConditioningTag::edited};
  out.unedited = {out.plain.frame(0), ConditioningTag::unedited};
  return out;
}

DenoiserFactory oracle_factory(Track gt, std::optional<SpatioTemporalMask> coverage, const BackendConfig& backend) {
  return [gt = std::move(gt), coverage = std::move(coverage), backend](const PreparedVideo& prep,
                                                                       const NoiseSchedule<double>& schedule)
             -> std::unique_ptr<Denoiser<double>> {
    if (gt.height != prep.plain.height() || gt.width != prep.plain.width())
      throw InvalidArgument("oracle backend: ground truth resolution differs from the video");
    if (coverage && (coverage->height() != prep.plain.height() || coverage->width() != prep.plain.width()))
      throw InvalidArgument("oracle backend: coverage resolution differs from the video");
    const VideoTensor target = render_marker_target(prep.plain, gt, coverage ? &*coverage : nullptr, prep.marker);
    std::optional<DriftModel> drift;
    if (backend.drift) drift = DriftModel{make_drift(prep.plain.frames(), backend.drift_seed, backend.drift_pixels),
                                          backend.drift_prior};
    return std::make_unique<TrajectoryOracleDenoiser<double>>(to_latent<double>(target), to_latent<double>(prep.plain),
                                                              schedule, backend.contamination, std::move(drift));
  };
}

DenoiserFactory analytic_factory(double sigma) {
  return [sigma](const PreparedVideo& prep, const NoiseSchedule<double>& schedule) -> std::unique_ptr<Denoiser<double>> {
    return std::make_unique<AnalyticGaussianDenoiser<double>>(to_latent<double>(prep.prepared), sigma, schedule);
  };
}

DenoiserFactory remote_factory(const RemoteOptions& options) {
  return [options](const PreparedVideo&, const NoiseSchedule<double>&) -> std::unique_ptr<Denoiser<double>> {
    return std::make_unique<RemoteDenoiser<double>>(options);
  };
}

PointPromptingSession::PointPromptingSession(const VideoTensor& video, const Query& query,
                                             const PipelineConfig& config, const DenoiserFactory& factory,
                                             std::shared_ptr<const LatentCodec<double>> codec)
    : config_(config), codec_(std::move(codec)) {
  config_.validate();
  prepared_ = prepare_video(video, query, config_);
  schedule_ = config_.make_schedule();
  denoiser_ = factory(prepared_, schedule_);
  if (!denoiser_) throw InvalidArgument("denoiser factory returned nothing");
  if (!codec_) codec_ = std::make_shared<IdentityCodec<double>>();
  x0_ = codec_->encode(to_latent<double>(prepared_.prepared));
  tracker_ = config_.effective_tracker(video.height(), video.width());
  refinement_ = config_.effective_refinement(video.height(), video.width());
}

VideoTensor PointPromptingSession::regenerate() const {
  const auto latent = sdedit_regenerate(x0_, prepared_.edited, prepared_.unedited, *denoiser_, schedule_,
                                        config_.sampler, config_.guidance);
  return finish(latent);
}

VideoTensor PointPromptingSession::regenerate_masked(const SpatioTemporalMask& pixel_mask) const {
  const VideoTensor& ref = prepared_.prepared;
  if (pixel_mask.height() != ref.height() || pixel_mask.width() != ref.width() || pixel_mask.frames() < 1 ||
      pixel_mask.frames() > ref.frames())
    throw InvalidArgument("regenerate_masked: mask does not fit the video");
  SpatioTemporalMask padded(ref.frames(), ref.height(), ref.width());
  for (Index f = 0; f < ref.frames(); ++f) {
    const Index src = std::min<Index>(f, pixel_mask.frames() - 1);
    for (Index y = 0; y < ref.height(); ++y)
      for (Index x = 0; x < ref.width(); ++x) padded.set(f, y, x, pixel_mask(src, y, x));
  }
  const SpatioTemporalMask latent_mask = pool_mask(padded, codec_->spatial_factor(), codec_->temporal_factor());
  if (!latent_mask.matches(x0_.shape())) throw InvalidArgument("regenerate_masked: pooled mask does not fit the latent");
  const auto latent = inpaint_regenerate(x0_, latent_mask, prepared_.edited, prepared_.unedited, *denoiser_, schedule_,
                                         config_.sampler, config_.guidance);
  return finish(latent);
}

VideoTensor PointPromptingSession::finish(const LatentVideo<double>& latent) const {
  const auto pixels = codec_->decode(latent, prepared_.prepared.latent_shape());
  return truncate_video(from_latent(pixels), prepared_.original_length);
}

QueryResult PointPromptingSession::run() const {
  QueryResult out;
  out.generated = regenerate();
  out.coarse = track_video(out.generated, prepared_.query, tracker_);
  out.refined = refinement_.rounds > 0 ? refine_track(out.coarse, *this, tracker_, refinement_) : out.coarse;
  return out;
}

QueryResult track_query(const VideoTensor& video, const Query& query, const PipelineConfig& config,
                        const DenoiserFactory& factory, std::shared_ptr<const LatentCodec<double>> codec) {
  return PointPromptingSession(video, query, config, factory, std::move(codec)).run();
}

}  // namespace ctrack
