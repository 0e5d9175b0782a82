#include "doctest.h"

#include <chrono>

#include "ctrack/synthetic.hpp"
#include "ctrack/tracker.hpp"

using namespace ctrack;

namespace {

bool covered(const SceneConfig& cfg, double u, double v, int k) {
  for (const auto& o : cfg.occluders)
    if (o.covers(u, v, k)) return true;
  return false;
}

}  // namespace

TEST_CASE("sprite paths") {
  Sprite s;
  s.keyframes = {{0.0, 0.0}, {10.0, 20.0}};
  CHECK(s.position(0, 11) == Point2{0.0, 0.0});
  CHECK(s.position(5, 11).u == doctest::Approx(5.0));
  CHECK(s.position(10, 11).v == doctest::Approx(20.0));
  s.keyframes = {{0.0, 0.0}, {10.0, 0.0}, {10.0, 10.0}};
  CHECK(s.position(0, 9) == Point2{0.0, 0.0});
  CHECK(s.position(4, 9).u == doctest::Approx(10.0));
  CHECK(s.position(4, 9).v == doctest::Approx(0.0));
  CHECK(s.position(8, 9).v == doctest::Approx(10.0));
  s.keyframes = {{3.0, 4.0}};
  CHECK(s.position(7, 9) == Point2{3.0, 4.0});
}

TEST_CASE("occluder rectangle is closed and moves") {
  const Occluder o{10.0, 5.0, 4.0, 2.0, 1.0, 0.0};
  CHECK(o.covers(10.0, 5.0, 0));
  CHECK(o.covers(14.0, 7.0, 0));
  CHECK_FALSE(o.covers(14.1, 7.0, 0));
  CHECK_FALSE(o.covers(10.0, 5.0, 1));
  CHECK(o.covers(15.0, 6.0, 1));
}

TEST_CASE("scene validation") {
  SceneConfig cfg;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg.sprites.push_back({{{10.0, 10.0}, {70.0, 10.0}}});
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg.sprites[0].keyframes[1] = {50.0, 10.0};
  CHECK_NOTHROW(cfg.validate());
  cfg.occluders.push_back({8.0, 8.0, 4.0, 4.0});
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg.occluders[0].x = 30.0;
  CHECK_NOTHROW(cfg.validate());
  cfg.frames = 1;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

TEST_CASE("presets parse") {
  for (Preset p : {Preset::linear, Preset::curved, Preset::occlusion, Preset::near_boundary, Preset::distractor,
                   Preset::mixed})
    CHECK(parse_preset(to_string(p)) == p);
  CHECK_THROWS_AS(parse_preset("wobbly"), InvalidArgument);
  CHECK_THROWS_AS(preset_config(Preset::mixed, 1), InvalidArgument);
}

TEST_CASE("suite: identity, bounds and visibility") {
  const auto suite = make_suite(10, Preset::mixed);
  REQUIRE(suite.size() == 10);
  CHECK(suite[0].id == "case_000_linear");
  CHECK(suite[7].id == "case_007_occlusion");
  for (const auto& c : suite) {
    CHECK(c.video.frames() == 17);
    CHECK(c.video.width() == 64);
    REQUIRE(c.gt_tracks.size() == 1);
    const Track& gt = c.gt_tracks[0];
    CHECK(gt.video_id == c.id);
    CHECK(gt.length() == 17);
    CHECK(gt.query == Query{0, gt.points[0].u, gt.points[0].v});
    CHECK(gt.points[0].visible);
    for (int k = 0; k < gt.length(); ++k) {
      const auto& p = gt.points[k];
      CHECK(p.u >= 0.0);
      CHECK(p.u <= 63.0);
      CHECK(p.v >= 0.0);
      CHECK(p.v <= 63.0);
      CHECK(p.visible == !covered(c.config, p.u, p.v, k));
    }
    for (int k = 0; k < c.video.frames(); ++k)
      for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 64; ++x) CHECK(c.occluder_coverage(k, y, x) == covered(c.config, x, y, k));
  }
}

TEST_CASE("suite is deterministic and seed dependent") {
  const auto a = make_suite(3, Preset::curved);
  const auto b = make_suite(3, Preset::curved);
  const auto c = make_suite(3, Preset::curved, {64, 64, 17, 2});
  for (int i = 0; i < 3; ++i) {
    CHECK(a[i].video == b[i].video);
    CHECK(a[i].gt_tracks == b[i].gt_tracks);
    CHECK_FALSE(a[i].video == c[i].video);
  }
}

TEST_CASE("other resolutions") {
  const auto s = make_suite(2, Preset::occlusion, {48, 80, 9, 3});
  CHECK(s[0].video.height() == 48);
  CHECK(s[0].video.width() == 80);
  CHECK(s[0].video.frames() == 9);
}

TEST_CASE("marker target differs only on visible marker pixels") {
  for (const auto& c : make_suite(10, Preset::mixed, {64, 64, 17, 4})) {
    const Track& gt = c.gt_tracks[0];
    const VideoTensor& t = c.marker_targets[0];
    for (int k = 0; k < t.frames(); ++k) {
      SpatioTemporalMask disk(1, 64, 64);
      if (gt.points[k].visible)
        for (auto [x, y] : disk_pixels(64, 64, gt.points[k].u, gt.points[k].v, 2.0))
          if (!c.occluder_coverage(k, y, x)) disk.set(0, y, x, true);
      for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 64; ++x) {
          if (disk(0, y, x)) CHECK(t.frame(k).at(x, y) == Rgb{255, 0, 0});
          else CHECK(t.frame(k).at(x, y) == c.video.frame(k).at(x, y));
        }
    }
  }
}

TEST_CASE("occlusion cases occlude") {
  for (const auto& c : make_suite(20, Preset::occlusion)) {
    int hidden = 0;
    for (const auto& p : c.gt_tracks[0].points) hidden += !p.visible;
    CHECK(hidden >= 1);
    CHECK(hidden < 17);
  }
}

TEST_CASE("plain scenes hold no marker-colored pixels") {
  const TrackerParams tracker;
  for (const auto& c : make_suite(10, Preset::mixed)) {
    if (c.preset == Preset::distractor) continue;
    for (const auto& f : c.video.frame_list())
      for (const Rgb& p : f.pixels()) CHECK_FALSE(is_marker_pixel(p, tracker));
  }
}

TEST_CASE("distractors look like the marker until rebalanced") {
  const TrackerParams tracker;
  const RebalanceParams rebalance;
  for (const auto& c : make_suite(5, Preset::distractor)) {
    REQUIRE(c.config.distractors.size() >= 2);
    int raw = 0, balanced = 0;
    for (const Rgb& p : c.video.frame(0).pixels()) {
      raw += is_marker_pixel(p, tracker);
      balanced += is_marker_pixel(rebalance_pixel(p, rebalance), tracker);
    }
    CHECK(raw >= 18);
    CHECK(balanced == 0);
  }
}

TEST_CASE("drift shifts") {
  const auto d = make_drift(9, 5, 3);
  REQUIRE(d.size() == 9);
  CHECK(d[0].dx == 0);
  CHECK(d[0].dy == 0);
  for (std::size_t k = 1; k < d.size(); ++k) CHECK(std::abs(d[k].dx) + std::abs(d[k].dy) == 3);
  CHECK(make_drift(9, 5, 3) == d);
}

TEST_CASE("twenty-case suite is quick") {
  const auto t0 = std::chrono::steady_clock::now();
  const auto suite = make_suite(20, Preset::mixed);
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(suite.size() == 20);
  CHECK(s < 10.0);
}
