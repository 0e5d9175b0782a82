#include "doctest.h"

#include <cmath>

#include "ctrack/refinement.hpp"
#include "ctrack/video_prep.hpp"

using namespace ctrack;

namespace {

const Rgb kGray{120, 130, 140};

Track line_track(int frames, double u0, double v0, double du) {
  Track t;
  t.video_id = "t";
  t.height = 48;
  t.width = 64;
  t.query = {0, u0, v0};
  for (int k = 0; k < frames; ++k) t.points.push_back({u0 + du * k, v0, true});
  return t;
}

// Draws the marker at the true path, but only on free pixels.
class PathRegenerator final : public MaskedRegenerator {
 public:
  explicit PathRegenerator(Track truth) : truth_(std::move(truth)) {}

  VideoTensor regenerate_masked(const SpatioTemporalMask& mask) const override {
    ++calls;
    std::vector<Image> frames;
    for (int k = 0; k < truth_.length(); ++k) {
      Image img(truth_.width, truth_.height, kGray);
      const auto& p = truth_.points[k];
      for (auto [x, y] : disk_pixels(img.width(), img.height(), p.u, p.v, 2.0))
        if (mask(k, y, x)) img.at(x, y) = {255, 0, 0};
      frames.push_back(img);
    }
    last_mask = mask;
    return VideoTensor(frames);
  }

  mutable int calls = 0;
  mutable SpatioTemporalMask last_mask;

 private:
  Track truth_;
};

}  // namespace

TEST_CASE("tube mask is a clipped disk per frame") {
  Track t = line_track(3, 2.0, 2.0, 10.0);
  t.points[2].visible = false;
  const auto m = build_mask(t, 3.0, 3, 48, 64);
  CHECK(m.frames() == 3);
  CHECK(m.height() == 48);
  CHECK(m.width() == 64);
  CHECK(m(0, 2, 2));
  CHECK(m(0, 0, 0));
  CHECK(m(0, 2, 5));
  CHECK_FALSE(m(0, 2, 6));
  CHECK_FALSE(m(0, 5, 5));
  CHECK(m(1, 2, 12));
  CHECK_FALSE(m(1, 2, 2));
  CHECK(m(2, 2, 22));  // held positions are covered too
  for (int k = 0; k < 3; ++k) {
    int n = 0;
    for (int y = 0; y < 48; ++y)
      for (int x = 0; x < 64; ++x) n += m(k, y, x);
    CHECK(n == static_cast<int>(disk_pixels(64, 48, t.points[k].u, 2.0, 3.0).size()));
  }
}

TEST_CASE("tube mask shape checks") {
  const Track t = line_track(3, 5.0, 5.0, 1.0);
  CHECK_THROWS_AS(build_mask(t, 3.0, 2, 48, 64), InvalidArgument);
  CHECK_THROWS_AS(build_mask(t, -1.0, 3, 48, 64), InvalidArgument);
}

TEST_CASE("refinement params") {
  const auto s = RefinementParams{}.scaled_for(64, 96);
  CHECK(s.tube_radius == doctest::Approx(40.0 * 64.0 / 480.0));
  RefinementParams p;
  p.tube_radius = 1.0;
  CHECK_THROWS_AS(p.validate(2.0), InvalidArgument);
  p = {};
  p.rounds = -1;
  CHECK_THROWS_AS(p.validate(2.0), InvalidArgument);
}

TEST_CASE("refinement pulls a drifted track back onto the path") {
  const Track truth = line_track(9, 10.0, 20.0, 4.0);
  Track coarse = truth;
  for (int k = 1; k < coarse.length(); ++k) coarse.points[k].v += 3.0;
  PathRegenerator regen(truth);
  const auto tracker = TrackerParams{}.scaled_for(48, 64, 2.0);
  RefinementParams params;
  params.tube_radius = 6.0;
  const Track refined = refine_track(coarse, regen, tracker, params);
  CHECK(regen.calls == 1);
  REQUIRE(refined.length() == truth.length());
  for (int k = 0; k < truth.length(); ++k) {
    CHECK(refined.points[k].visible);
    CHECK(refined.points[k].u == doctest::Approx(truth.points[k].u));
    CHECK(refined.points[k].v == doctest::Approx(truth.points[k].v));
  }
  CHECK(regen.last_mask == build_mask(coarse, 6.0, 9, 48, 64));
  CHECK(refined.video_id == coarse.video_id);
  CHECK(refined.query == coarse.query);
}

TEST_CASE("refinement rounds") {
  const Track truth = line_track(5, 10.0, 20.0, 4.0);
  PathRegenerator regen(truth);
  const auto tracker = TrackerParams{}.scaled_for(48, 64, 2.0);
  RefinementParams params;
  params.tube_radius = 6.0;
  params.rounds = 0;
  CHECK(refine_track(truth, regen, tracker, params) == truth);
  CHECK(regen.calls == 0);
  params.rounds = 3;
  refine_track(truth, regen, tracker, params);
  CHECK(regen.calls == 3);
}
