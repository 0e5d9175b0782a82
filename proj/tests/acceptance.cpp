// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "ctrack/analytic_denoiser.hpp"
#include "ctrack/color.hpp"
#include "ctrack/metrics.hpp"
#include "ctrack/oracle_denoiser.hpp"
#include "ctrack/pipeline.hpp"
#include "ctrack/sampler.hpp"
#include "ctrack/synthetic.hpp"
#include "test_support.hpp"

using namespace ctrack;

namespace {

namespace tol {
constexpr double kMeanInStd = 0.05;
constexpr double kVarRel = 0.10;
constexpr double kMomentsSeconds = 60.0;
constexpr double kE2eDelta = 0.90;
constexpr double kE2eOa = 0.90;
constexpr double kE2eSeconds = 300.0;
constexpr double kLambda0MissFraction = 0.5;  // strictly greater
constexpr double kLambda8Detect = 1.0;
constexpr double kIdentity = 1e-6;
constexpr double kRefineStrictShare = 0.70;
constexpr double kRebalanceOaGain = 0.10;
constexpr double kMetricsExact = 1e-12;
constexpr int kColorMaxError = 1;
constexpr double kColorSeconds = 120.0;
}  // namespace tol

int failures = 0;

void report(bool pass, const char* name, const std::string& detail) {
  std::printf("[%s] %s: %s\n", pass ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  failures += pass ? 0 : 1;
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

QueryResult run_oracle(const SyntheticCase& c, const PipelineConfig& cfg) {
  const Track& gt = c.gt_tracks[0];
  return track_query(c.video, gt.query, cfg, oracle_factory(gt, c.occluder_coverage, cfg.backend));
}

void analytic_moments() {
  const auto t0 = std::chrono::steady_clock::now();
  const double mu = 0.3, sigma = 0.5;
  const Shape s{5000, 8, 8, 1};
  const auto schedule = NoiseSchedule<double>::linear(50);
  const AnalyticGaussianDenoiser<double> d(LatentVideod::Constant(s, mu), sigma, schedule);
  SamplerStreams streams(2024);
  const Conditioning none{};
  const auto x = sample_from_noise(s, none, none, d, schedule, SamplerConfig{}, GuidanceConfig{0.0}, streams);
  const double mean = x.array().mean();
  const double var = (x.array() - mean).square().sum() / static_cast<double>(x.size() - 1);
  const double me = std::abs(mean - mu) / sigma, ve = std::abs(var - sigma * sigma) / (sigma * sigma);
  const double secs = seconds_since(t0);
  report(me <= tol::kMeanInStd && ve <= tol::kVarRel && secs < tol::kMomentsSeconds, "analytic sampler moments",
         fmt("mean err %.4f sigma (<= %.2f), var err %.2f%% (<= %.0f%%), %.1f s", me, tol::kMeanInStd, 100 * ve,
             100 * tol::kVarRel, secs));
}

void end_to_end() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto suite = make_suite(20, Preset::mixed);
  double delta = 0.0, oa = 0.0;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    PipelineConfig cfg;
    cfg.sampler.seed = i;
    const auto m = evaluate_track(run_oracle(suite[i], cfg).refined, suite[i].gt_tracks[0]);
    delta += m.delta_avg.value_or(0.0);
    oa += m.oa;
  }
  delta /= suite.size();
  oa /= suite.size();
  const double secs = seconds_since(t0);
  report(delta >= tol::kE2eDelta && oa >= tol::kE2eOa && secs < tol::kE2eSeconds, "end-to-end oracle tracking",
         fmt("delta_avg %.3f (>= %.2f), OA %.3f (>= %.2f), 20 cases, %.1f s", delta, tol::kE2eDelta, oa, tol::kE2eOa,
             secs));
}

void guidance() {
  const auto suite = make_suite(10, Preset::mixed, {64, 64, 17, 11});
  auto detection = [&](double lambda) {
    int hit = 0, total = 0;
    for (std::size_t i = 0; i < suite.size(); ++i) {
      const auto& c = suite[i];
      PipelineConfig cfg;
      cfg.guidance.lambda = lambda;
      cfg.backend.contamination = 0.5;
      cfg.sampler.seed = 100 + i;
      const PointPromptingSession session(c.video, c.gt_tracks[0].query, cfg,
                                          oracle_factory(c.gt_tracks[0], c.occluder_coverage, cfg.backend));
      const VideoTensor gen = session.regenerate();
      for (int k = 1; k < gen.frames(); ++k) {
        const auto& p = c.gt_tracks[0].points[k];
        if (!p.visible) continue;
        ++total;
        hit += !detect_marker_pixels(gen.frame(k), {p.u, p.v}, cfg.marker.radius + 1.0, session.tracker_params()).empty();
      }
    }
    return static_cast<double>(hit) / total;
  };
  const double miss0 = 1.0 - detection(0.0);
  const double det8 = detection(8.0);

  const Shape s{3, 16, 16, 3};
  const auto schedule = NoiseSchedule<double>::linear(50);
  const auto m = testing::ramp(s, -0.6, 0.017), u = testing::ramp(s, 0.4, -0.009), x = testing::ramp(s, 1.1, -0.03);
  const TrajectoryOracleDenoiser<double> clean(m, u, schedule), dirty(m, u, schedule, 0.5);
  const Conditioning e{Image(1, 1), ConditioningTag::edited}, n{Image(1, 1), ConditioningTag::unedited};
  const Conditioning* both[] = {&e, &n};
  double worst = 0.0;
  for (int t = 1; t <= 50; ++t) {
    const auto pd = dirty.epsilon_batch(x, t, both);
    const auto em = clean.epsilon(x, t, e);
    worst = std::max(worst, (guided_epsilon(pd[0], pd[1], 1.0).array() - em.array()).abs().maxCoeff());
  }
  report(miss0 > tol::kLambda0MissFraction && det8 >= tol::kLambda8Detect && worst <= tol::kIdentity,
         "guidance necessity",
         fmt("w=0.5: lambda=0 misses %.1f%% of visible frames (> 50%%), lambda=8 detects %.1f%% (100%%), "
             "lambda=1 identity err %.1e (<= 1e-6)",
             100 * miss0, 100 * det8, worst));
}

void refinement() {
  const auto suite = make_suite(20, Preset::linear, {64, 64, 17, 7});
  double coarse = 0.0, refined = 0.0;
  int strict = 0;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    PipelineConfig cfg;
    cfg.backend.drift = true;
    cfg.backend.drift_seed = 500 + i;
    cfg.sampler.seed = i;
    const auto r = run_oracle(suite[i], cfg);
    const double a = evaluate_track(r.coarse, suite[i].gt_tracks[0]).delta_avg.value_or(0.0);
    const double b = evaluate_track(r.refined, suite[i].gt_tracks[0]).delta_avg.value_or(0.0);
    coarse += a;
    refined += b;
    strict += b > a;
  }
  coarse /= suite.size();
  refined /= suite.size();
  const double share = static_cast<double>(strict) / suite.size();
  report(refined >= coarse && share >= tol::kRefineStrictShare, "refinement direction",
         fmt("drifted oracle: unrefined delta_avg %.3f, refined %.3f, strict gains on %d/20 (>= 70%%)", coarse, refined,
             strict));
}

void rebalancing() {
  const auto suite = make_suite(20, Preset::distractor, {64, 64, 17, 3});
  double with = 0.0, without = 0.0;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    PipelineConfig cfg;
    cfg.sampler.seed = i;
    with += evaluate_track(run_oracle(suite[i], cfg).refined, suite[i].gt_tracks[0]).oa;
    cfg.rebalance = false;
    without += evaluate_track(run_oracle(suite[i], cfg).refined, suite[i].gt_tracks[0]).oa;
  }
  with /= suite.size();
  without /= suite.size();
  report(with - without >= tol::kRebalanceOaGain, "rebalancing necessity",
         fmt("distractor suite OA %.3f with vs %.3f without, gain %.3f (>= %.2f)", with, without, with - without,
             tol::kRebalanceOaGain));
}

void metrics_oracle() {
  std::mt19937_64 rng(1234);
  const auto taus = default_thresholds();
  double worst = 0.0;
  bool defined_agree = true;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto [pred, gt] = testing::random_instance(rng, 10);
    const auto ref = testing::reference_metrics(pred, gt, taus);
    Track p, g;
    p.height = g.height = p.width = g.width = kEvalResolution;
    p.points = pred;
    g.points = gt;
    const auto m = evaluate_track(p, g, taus);
    worst = std::max({worst, std::abs(m.aj - ref.aj), std::abs(m.oa - ref.oa)});
    defined_agree = defined_agree && m.delta_avg.has_value() == ref.delta_defined;
    if (m.delta_avg && ref.delta_defined) worst = std::max(worst, std::abs(*m.delta_avg - ref.delta_avg));
  }
  report(worst <= tol::kMetricsExact && defined_agree, "metrics oracle equivalence",
         fmt("1000 random 10-frame instances, max |diff| %.1e (<= 1e-12)", worst));
}

SpatioTemporalMask random_mask(std::mt19937_64& rng, int frames, int h, int w) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SpatioTemporalMask m(frames, h, w);
  const int kind = static_cast<int>(rng() % 3);
  if (kind == 0) {
    const double density = unit(rng);
    for (int f = 0; f < frames; ++f)
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) m.set(f, y, x, unit(rng) < density);
  } else {
    const int blobs = 1 + static_cast<int>(rng() % 6);
    for (int b = 0; b < blobs; ++b) {
      const double u = w * unit(rng), v = h * unit(rng), r = 2.0 + 14.0 * unit(rng);
      const int f0 = static_cast<int>(rng() % frames), f1 = kind == 1 ? frames - 1 : f0;
      for (int f = f0; f <= f1; ++f)
        for (auto [x, y] : disk_pixels(w, h, u, v, r)) m.set(f, y, x, true);
    }
  }
  return m;
}

void conservation() {
  std::mt19937_64 rng(99);
  const auto suite = make_suite(5, Preset::mixed, {64, 64, 17, 21});
  int bad = 0;
  long long checked = 0;
  for (int i = 0; i < 100; ++i) {
    const auto& c = suite[i % 5];
    PipelineConfig cfg;
    cfg.backend.drift = i % 2 == 1;
    cfg.backend.contamination = 0.25 * (i % 3);
    cfg.sampler.seed = i;
    const PointPromptingSession session(c.video, c.gt_tracks[0].query, cfg,
                                        oracle_factory(c.gt_tracks[0], c.occluder_coverage, cfg.backend));
    const auto mask = random_mask(rng, 17, 64, 64);
    const VideoTensor out = session.regenerate_masked(mask);
    const VideoTensor& in = session.prepared().prepared;
    bool ok = true;
    for (int f = 0; f < 17; ++f)
      for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 64; ++x)
          if (!mask(f, y, x)) {
            ++checked;
            ok = ok && out.frame(f).at(x, y) == in.frame(f).at(x, y);
          }
    bad += !ok;
  }
  report(bad == 0, "inpainting conservation",
         fmt("100 random masks, %lld unmasked pixels compared, %d masks with changes outside", checked, bad));
}

void color_round_trip() {
  const auto t0 = std::chrono::steady_clock::now();
  int worst = 0;
  for (int r = 0; r < 256; ++r)
    for (int g = 0; g < 256; ++g)
      for (int b = 0; b < 256; ++b) {
        const Rgb p{static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g), static_cast<std::uint8_t>(b)};
        const Rgb q = hsv_to_rgb(rgb_to_hsv(p));
        worst = std::max({worst, std::abs(q.r - r), std::abs(q.g - g), std::abs(q.b - b)});
      }
  const double secs = seconds_since(t0);
  report(worst <= tol::kColorMaxError && secs < tol::kColorSeconds, "exhaustive color round trip",
         fmt("2^24 values, max channel error %d (<= %d), %.1f s", worst, tol::kColorMaxError, secs));
}

}  // namespace

int main() {
  analytic_moments();
  end_to_end();
  guidance();
  refinement();
  rebalancing();
  metrics_oracle();
  conservation();
  color_round_trip();
  std::printf("[SKIP] protocol contract: needs the model server; client side covered by test_remote\n");
  return failures == 0 ? 0 : 1;
}
