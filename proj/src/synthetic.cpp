#include "ctrack/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "ctrack/errors.hpp"

namespace ctrack {

Point2 Sprite::position(int frame, int frames) const {
  if (keyframes.empty()) throw InvalidArgument("Sprite: no keyframes");
  if (frames < 1) throw InvalidArgument("Sprite: frames must be positive");
  const int k = static_cast<int>(keyframes.size());
  if (k == 1 || frames == 1) return keyframes.front();

  const double s = static_cast<double>(frame) / (frames - 1) * (k - 1);
  const int i = std::clamp(static_cast<int>(std::floor(s)), 0, k - 2);
  const double t = s - i;
  const Point2& p1 = keyframes[static_cast<std::size_t>(i)];
  const Point2& p2 = keyframes[static_cast<std::size_t>(i + 1)];
  if (k == 2) return {p1.u + t * (p2.u - p1.u), p1.v + t * (p2.v - p1.v)};

  const Point2& p0 = keyframes[static_cast<std::size_t>(std::max(i - 1, 0))];
  const Point2& p3 = keyframes[static_cast<std::size_t>(std::min(i + 2, k - 1))];
  const double t2 = t * t, t3 = t2 * t;
  auto cr = [&](double a, double b, double c, double d) {
    return 0.5 * (2.0 * b + (c - a) * t + (2.0 * a - 5.0 * b + 4.0 * c - d) * t2 + (3.0 * b - a - 3.0 * c + d) * t3);
  };
  return {cr(p0.u, p1.u, p2.u, p3.u), cr(p0.v, p1.v, p2.v, p3.v)};
}

bool Occluder::covers(double u, double v, int frame) const {
  const double x0 = x + vx * frame;
  const double y0 = y + vy * frame;
  return u >= x0 && u <= x0 + w && v >= y0 && v <= y0 + h;
}

void SceneConfig::validate() const {
  if (height < 8 || width < 8) throw InvalidArgument("SceneConfig: frames must be at least 8x8");
  if (frames < 2) throw InvalidArgument("SceneConfig: need at least 2 frames");
  if (sprites.empty()) throw InvalidArgument("SceneConfig: no sprites");
  for (const auto& sprite : sprites) {
    if (sprite.keyframes.empty()) throw InvalidArgument("SceneConfig: sprite without keyframes");
    if (!(sprite.half_size > 0.0)) throw InvalidArgument("SceneConfig: sprite size must be positive");
    for (int k = 0; k < frames; ++k) {
      const Point2 p = sprite.position(k, frames);
      if (!(p.u >= 0.0 && p.v >= 0.0 && p.u <= width - 1 && p.v <= height - 1))
        throw InvalidArgument("SceneConfig: sprite trajectory leaves the frame at frame " + std::to_string(k));
    }
    const Point2 q = sprite.position(0, frames);
    for (const auto& o : occluders) {
      if (o.covers(q.u, q.v, 0)) throw InvalidArgument("SceneConfig: query point is occluded in frame 0");
    }
  }
  for (const auto& o : occluders) {
    if (!(o.w > 0.0 && o.h > 0.0)) throw InvalidArgument("SceneConfig: occluder size must be positive");
  }
}

std::string_view to_string(Preset preset) {
  switch (preset) {
    case Preset::linear: return "linear";
    case Preset::curved: return "curved";
    case Preset::occlusion: return "occlusion";
    case Preset::near_boundary: return "near_boundary";
    case Preset::distractor: return "distractor";
    case Preset::mixed: return "mixed";
  }
  return "unknown";
}

Preset parse_preset(std::string_view text) {
  for (Preset p : {Preset::linear, Preset::curved, Preset::occlusion, Preset::near_boundary, Preset::distractor,
                   Preset::mixed}) {
    if (text == to_string(p)) return p;
  }
  throw InvalidArgument("unknown preset: " + std::string(text));
}

namespace {

// Uniform draws built on raw engine output so streams match across standard
// libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int index(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Deterministic per-pixel noise in [-1, 1].
double pixel_noise(std::uint64_t seed, int x, int y) {
  const std::uint64_t h = mix(seed ^ mix((static_cast<std::uint64_t>(x) << 32) | static_cast<std::uint32_t>(y)));
  return static_cast<double>(h >> 11) * 0x1.0p-52 - 1.0;
}

std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0))); }

Rgb shade(Rgb c, double delta) { return {to_byte(c.r + delta), to_byte(c.g + delta), to_byte(c.b + delta)}; }

// Background colors with red never the largest channel.
constexpr std::array<Rgb, 6> kBackground = {{
    {110, 160, 200}, {170, 215, 140}, {130, 190, 170}, {150, 200, 210}, {120, 140, 190}, {160, 210, 220},
}};

constexpr std::array<Rgb, 4> kSprites = {{{190, 225, 215}, {200, 215, 240}, {175, 230, 200}, {210, 220, 235}}};

constexpr std::array<Rgb, 3> kOccluders = {{{45, 55, 75}, {60, 70, 50}, {70, 60, 80}}};

struct Wave {
  double kx, ky, phase;
};

Image render_background(int width, int height, Rng& rng, std::uint64_t noise_seed) {
  const int n = static_cast<int>(kBackground.size());
  const int i1 = rng.index(n);
  const int i2 = (i1 + 1 + rng.index(n - 1)) % n;
  const Rgb c1 = kBackground[static_cast<std::size_t>(i1)];
  const Rgb c2 = kBackground[static_cast<std::size_t>(i2)];
  std::array<Wave, 3> waves;
  for (auto& wv : waves) {
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double freq = rng.uniform(0.15, 0.45);
    wv = {freq * std::cos(angle), freq * std::sin(angle), rng.uniform(0.0, 2.0 * std::numbers::pi)};
  }
  Image out(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double f = 0.0;
      for (const auto& wv : waves) f += std::sin(wv.kx * x + wv.ky * y + wv.phase);
      const double t = 0.5 + f / 6.0;
      const double n = 6.0 * pixel_noise(noise_seed, x, y);
      out.at(x, y) = {to_byte(c1.r + t * (c2.r - c1.r) + n), to_byte(c1.g + t * (c2.g - c1.g) + n),
                      to_byte(c1.b + t * (c2.b - c1.b) + n)};
    }
  }
  return out;
}

void draw_rect(Image& img, double x0, double y0, double w, double h, auto&& color_at) {
  const int xa = std::max(0, static_cast<int>(std::ceil(x0)));
  const int ya = std::max(0, static_cast<int>(std::ceil(y0)));
  const int xb = std::min(img.width() - 1, static_cast<int>(std::floor(x0 + w)));
  const int yb = std::min(img.height() - 1, static_cast<int>(std::floor(y0 + h)));
  for (int y = ya; y <= yb; ++y)
    for (int x = xa; x <= xb; ++x) img.at(x, y) = color_at(x, y);
}

}  // namespace

SyntheticCase generate_scene(const SceneConfig& config, std::uint64_t seed) {
  config.validate();
  Rng rng(mix(seed));
  const std::uint64_t noise_seed = mix(seed ^ 0x5bd1e995ull);

  Image background = render_background(config.width, config.height, rng, noise_seed);
  for (const auto& d : config.distractors) {
    draw_rect(background, d.x, d.y, d.w, d.h,
              [&](int x, int y) { return shade(d.color, 3.0 * pixel_noise(noise_seed + 1, x, y)); });
  }

  std::vector<std::array<double, 2>> phases;
  for (std::size_t i = 0; i < config.sprites.size(); ++i)
    phases.push_back({rng.uniform(0.0, 2.0 * std::numbers::pi), rng.uniform(0.0, 2.0 * std::numbers::pi)});

  SyntheticCase out;
  out.seed = seed;
  out.config = config;
  out.occluder_coverage = SpatioTemporalMask(config.frames, config.height, config.width);
  std::vector<Image> frames;
  frames.reserve(static_cast<std::size_t>(config.frames));
  for (int k = 0; k < config.frames; ++k) {
    Image img = background;
    for (std::size_t i = 0; i < config.sprites.size(); ++i) {
      const Sprite& sp = config.sprites[i];
      const Point2 c = sp.position(k, config.frames);
      const auto [p1, p2] = phases[i];
      draw_rect(img, c.u - sp.half_size, c.v - sp.half_size, 2.0 * sp.half_size, 2.0 * sp.half_size,
                [&](int x, int y) {
                  const double lx = x - c.u, ly = y - c.v;
                  return shade(sp.base, 15.0 * std::sin(0.9 * lx + p1) * std::sin(0.9 * ly + p2));
                });
    }
    for (const auto& o : config.occluders) {
      for (int y = 0; y < config.height; ++y) {
        for (int x = 0; x < config.width; ++x) {
          if (!o.covers(x, y, k)) continue;
          img.at(x, y) = shade(o.color, 4.0 * pixel_noise(noise_seed + 2, x, y));
          out.occluder_coverage.set(k, y, x, true);
        }
      }
    }
    frames.push_back(std::move(img));
  }
  out.video = VideoTensor(std::move(frames));

  for (std::size_t i = 0; i < config.sprites.size(); ++i) {
    Track gt;
    gt.video_id = "sprite_" + std::to_string(i);
    gt.height = config.height;
    gt.width = config.width;
    for (int k = 0; k < config.frames; ++k) {
      const Point2 p = config.sprites[i].position(k, config.frames);
      bool visible = true;
      for (const auto& o : config.occluders) visible = visible && !o.covers(p.u, p.v, k);
      gt.points.push_back({p.u, p.v, visible});
    }
    gt.query = {0, gt.points.front().u, gt.points.front().v};
    out.marker_targets.push_back(render_marker_target(out.video, gt, &out.occluder_coverage, MarkerSpec{}));
    out.gt_tracks.push_back(std::move(gt));
  }
  return out;
}

namespace {

Sprite random_sprite(Rng& rng, double scale) {
  Sprite s;
  s.base = kSprites[static_cast<std::size_t>(rng.index(static_cast<int>(kSprites.size())))];
  s.half_size = std::max(3.0, rng.uniform(4.0, 6.0) * scale);
  return s;
}

bool inside(const Sprite& s, int frames, double width, double height, double margin) {
  for (int k = 0; k < frames; ++k) {
    const Point2 p = s.position(k, frames);
    if (p.u < margin || p.v < margin || p.u > width - 1 - margin || p.v > height - 1 - margin) return false;
  }
  return true;
}

double max_step(const Sprite& s, int frames) {
  double best = 0.0;
  for (int k = 1; k < frames; ++k) {
    const Point2 a = s.position(k - 1, frames), b = s.position(k, frames);
    best = std::max(best, std::hypot(b.u - a.u, b.v - a.v));
  }
  return best;
}

// Sprite moving roughly horizontally past a vertical bar; the bar is placed
// on the path around a middle frame.
void occlusion_layout(SceneConfig& cfg, Rng& rng, double scale, double bar_lo, double bar_hi) {
  const double W = cfg.width, H = cfg.height;
  const double speed = rng.uniform(2.0, 2.6) * scale;
  const double u0 = rng.uniform(0.12, 0.2) * W;
  const double v0 = rng.uniform(0.3, 0.7) * H;
  const double dv = rng.uniform(-4.0, 4.0) * scale;
  const bool reverse = rng.uniform() < 0.5;
  Sprite s = random_sprite(rng, scale);
  const Point2 a{u0, v0}, b{u0 + speed * (cfg.frames - 1), v0 + dv};
  s.keyframes = reverse ? std::vector<Point2>{{W - 1 - a.u, a.v}, {W - 1 - b.u, b.v}} : std::vector<Point2>{a, b};
  const int mid = 6 + rng.index(5);
  const Point2 pm = s.position(std::min(mid, cfg.frames - 1), cfg.frames);
  Occluder o;
  o.w = rng.uniform(bar_lo, bar_hi) * scale;
  o.x = pm.u - 0.5 * o.w;
  o.y = 0.1 * H;
  o.h = 0.8 * H;
  o.color = kOccluders[static_cast<std::size_t>(rng.index(static_cast<int>(kOccluders.size())))];
  cfg.sprites = {s};
  cfg.occluders = {o};
}

}  // namespace

SceneConfig preset_config(Preset preset, std::uint64_t seed, int height, int width, int frames) {
  if (preset == Preset::mixed) throw InvalidArgument("preset_config: mixed is a suite option, not a scene preset");
  SceneConfig cfg;
  cfg.height = height;
  cfg.width = width;
  cfg.frames = frames;
  const double W = width, H = height;
  const double scale = std::min(width, height) / 64.0;
  const double margin = 3.0 * scale;
  // Frame-to-frame motion is kept well inside the default search radius.
  const double step_limit = 6.0 * scale * 16.0 / std::max(frames - 1, 1);
  Rng rng(mix(seed ^ 0xC0FFEEull));

  for (int attempt = 0; attempt < 1000; ++attempt) {
    cfg.sprites.clear();
    cfg.occluders.clear();
    cfg.distractors.clear();
    switch (preset) {
      case Preset::linear: {
        Sprite s = random_sprite(rng, scale);
        const Point2 a{rng.uniform(0.2, 0.8) * W, rng.uniform(0.2, 0.8) * H};
        const Point2 b{rng.uniform(0.1, 0.9) * W, rng.uniform(0.1, 0.9) * H};
        if (std::hypot(b.u - a.u, b.v - a.v) < 0.25 * std::min(W, H)) continue;
        s.keyframes = {a, b};
        cfg.sprites = {s};
        break;
      }
      case Preset::curved: {
        Sprite s = random_sprite(rng, scale);
        for (int i = 0; i < 4; ++i) s.keyframes.push_back({rng.uniform(0.2, 0.8) * W, rng.uniform(0.2, 0.8) * H});
        cfg.sprites = {s};
        break;
      }
      case Preset::occlusion:
        occlusion_layout(cfg, rng, scale, 5.0, 8.0);
        break;
      case Preset::near_boundary: {
        Sprite s = random_sprite(rng, scale);
        const double d = rng.uniform(3.0, 5.0) * scale;
        const double t0 = rng.uniform(0.1, 0.2), t1 = rng.uniform(0.8, 0.9);
        const int edge = rng.index(4);
        auto along = [&](double t) -> Point2 {
          switch (edge) {
            case 0: return {t * (W - 1), d};
            case 1: return {t * (W - 1), H - 1 - d};
            case 2: return {d, t * (H - 1)};
            default: return {W - 1 - d, t * (H - 1)};
          }
        };
        s.keyframes = rng.uniform() < 0.5 ? std::vector<Point2>{along(t0), along(t1)}
                                          : std::vector<Point2>{along(t1), along(t0)};
        cfg.sprites = {s};
        break;
      }
      case Preset::distractor: {
        occlusion_layout(cfg, rng, scale, 7.0, 10.0);
        const Sprite& s = cfg.sprites.front();
        const Occluder& o = cfg.occluders.front();
        int hold = 0;
        for (int k = 0; k < frames; ++k) {
          const Point2 p = s.position(k, frames);
          if (o.covers(p.u, p.v, k)) break;
          hold = k;
        }
        const Point2 ph = s.position(hold, frames);
        const double dir = s.keyframes.back().u > s.keyframes.front().u ? 1.0 : -1.0;
        const int patches = 2 + rng.index(2);
        for (int i = 0; i < patches; ++i) {
          Distractor d;
          d.w = d.h = 3.0 * scale;
          const double side = i % 2 == 0 ? -1.0 : 1.0;
          const double cu = ph.u - dir * rng.uniform(1.0, 3.0) * scale - dir * 4.0 * scale * (i / 2);
          const double cv = ph.v + side * rng.uniform(9.0, 11.0) * scale;
          d.x = cu - 0.5 * d.w;
          d.y = cv - 0.5 * d.h;
          cfg.distractors.push_back(d);
        }
        break;
      }
      case Preset::mixed:
        break;
    }
    const Sprite& s = cfg.sprites.front();
    if (!inside(s, frames, W, H, margin)) continue;
    if (max_step(s, frames) > step_limit) continue;
    if (!cfg.occluders.empty()) {
      const Occluder& o = cfg.occluders.front();
      const Point2 q = s.position(0, frames);
      if (o.covers(q.u, q.v, 0)) continue;
      bool occluded = false;
      for (int k = 0; k < frames; ++k) {
        const Point2 p = s.position(k, frames);
        occluded = occluded || o.covers(p.u, p.v, k);
      }
      if (!occluded) continue;
    }
    bool clear = true;
    for (const auto& d : cfg.distractors) {
      for (int k = 0; k < frames && clear; ++k) {
        const Point2 p = s.position(k, frames);
        const double du = std::max({d.x - p.u, 0.0, p.u - (d.x + d.w)});
        const double dv = std::max({d.y - p.v, 0.0, p.v - (d.y + d.h)});
        clear = std::hypot(du, dv) > 6.0 * scale;
      }
      clear = clear && d.x >= 0.0 && d.y >= 0.0 && d.x + d.w <= W - 1 && d.y + d.h <= H - 1;
      for (const auto& o : cfg.occluders) clear = clear && !(d.x + d.w >= o.x && d.x <= o.x + o.w);
    }
    if (!clear) continue;
    cfg.validate();
    return cfg;
  }
  throw InvalidArgument("preset_config: no valid layout for preset " + std::string(to_string(preset)) +
                        " at this resolution");
}

std::vector<SyntheticCase> make_suite(int n, Preset preset, const SuiteOptions& options) {
  if (n < 0) throw InvalidArgument("make_suite: negative case count");
  static constexpr Preset kCycle[] = {Preset::linear, Preset::curved, Preset::occlusion, Preset::near_boundary,
                                      Preset::distractor};
  std::vector<SyntheticCase> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Preset p = preset == Preset::mixed ? kCycle[i % 5] : preset;
    const std::uint64_t seed = options.base_seed * 1000003ull + static_cast<std::uint64_t>(i);
    SyntheticCase c = generate_scene(preset_config(p, seed, options.height, options.width, options.frames), seed);
    c.preset = p;
    char id[64];
    std::snprintf(id, sizeof(id), "case_%03d_%s", i, std::string(to_string(p)).c_str());
    c.id = id;
    for (auto& t : c.gt_tracks) t.video_id = c.id;
    out.push_back(std::move(c));
  }
  return out;
}

VideoTensor render_marker_target(const VideoTensor& base, const Track& gt, const SpatioTemporalMask* coverage,
                                 const MarkerSpec& marker) {
  if (gt.points.empty()) throw InvalidArgument("render_marker_target: empty ground truth");
  const Rgb color = marker.color();
  VideoTensor out = base;
  for (int k = 0; k < base.frames(); ++k) {
    const auto& p = gt.points[static_cast<std::size_t>(std::min(k, gt.length() - 1))];
    if (!p.visible) continue;
    Image& img = out.frame(k);
    const int ck = coverage ? std::min<int>(k, static_cast<int>(coverage->frames()) - 1) : 0;
    for (auto [x, y] : disk_pixels(img.width(), img.height(), p.u, p.v, marker.radius)) {
      if (coverage && (*coverage)(ck, y, x)) continue;
      img.at(x, y) = color;
    }
  }
  return out;
}

std::vector<FrameShift> make_drift(int frames, std::uint64_t seed, int magnitude) {
  if (frames < 1) throw InvalidArgument("make_drift: frames must be positive");
  static constexpr FrameShift kDirs[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  Rng rng(mix(seed ^ 0xD21F7ull));
  std::vector<FrameShift> out(static_cast<std::size_t>(frames));
  for (int k = 1; k < frames; ++k) {
    const FrameShift d = kDirs[rng.index(4)];
    out[static_cast<std::size_t>(k)] = {d.dx * magnitude, d.dy * magnitude};
  }
  return out;
}

}  // namespace ctrack
