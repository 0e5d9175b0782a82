#include "doctest.h"

#include <cmath>

#include "ctrack/color.hpp"

using namespace ctrack;

TEST_CASE("rgb_to_hsv reference values") {
  struct Case {
    Rgb rgb;
    double h, s, v;
  };
  const Case cases[] = {
      {{255, 0, 0}, 0.0, 255.0, 255.0},   {{0, 255, 0}, 120.0, 255.0, 255.0}, {{0, 0, 255}, 240.0, 255.0, 255.0},
      {{255, 255, 0}, 60.0, 255.0, 255.0}, {{128, 128, 128}, 0.0, 0.0, 128.0}, {{200, 100, 50}, 20.0, 191.25, 200.0},
      {{255, 0, 8}, 358.117647058823, 255.0, 255.0}, {{0, 0, 0}, 0.0, 0.0, 0.0},
  };
  for (const auto& c : cases) {
    const Hsv hsv = rgb_to_hsv(c.rgb);
    CHECK(hsv.h == doctest::Approx(c.h).epsilon(1e-12));
    CHECK(hsv.s == doctest::Approx(c.s).epsilon(1e-12));
    CHECK(hsv.v == doctest::Approx(c.v).epsilon(1e-12));
  }
}

TEST_CASE("hsv_to_rgb reference values and hue wrap") {
  CHECK(hsv_to_rgb({0, 255, 255}) == Rgb{255, 0, 0});
  CHECK(hsv_to_rgb({240, 255, 255}) == Rgb{0, 0, 255});
  CHECK(hsv_to_rgb({360, 255, 255}) == Rgb{255, 0, 0});
  CHECK(hsv_to_rgb({-120, 255, 255}) == Rgb{0, 0, 255});
  CHECK(hsv_to_rgb({20, 191.25, 200}) == Rgb{200, 100, 50});
  CHECK(hsv_to_rgb({77, 0, 90}) == Rgb{90, 90, 90});
}

TEST_CASE("rgb hsv round trip on a lattice") {
  int worst = 0;
  for (int r = 0; r < 256; r += 5)
    for (int g = 0; g < 256; g += 3)
      for (int b = 0; b < 256; b += 7) {
        const Rgb p{static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g), static_cast<std::uint8_t>(b)};
        const Rgb q = hsv_to_rgb(rgb_to_hsv(p));
        worst = std::max({worst, std::abs(p.r - q.r), std::abs(p.g - q.g), std::abs(p.b - q.b)});
      }
  CHECK(worst <= 1);
}

TEST_CASE("CIELAB reference values") {
  const Lab white = rgb_to_lab({255, 255, 255});
  CHECK(white.l == doctest::Approx(100.0).epsilon(1e-4));
  CHECK(std::abs(white.a) < 5e-3);
  CHECK(std::abs(white.b) < 5e-3);
  const Lab red = rgb_to_lab({255, 0, 0});
  CHECK(red.l == doctest::Approx(53.2408).epsilon(1e-4));
  CHECK(red.a == doctest::Approx(80.0925).epsilon(1e-4));
  CHECK(red.b == doctest::Approx(67.2032).epsilon(1e-4));
  CHECK(rgb_to_lab({0, 0, 0}).l == doctest::Approx(0.0));
  CHECK(delta_e(red, red) == 0.0);
  CHECK(delta_e({0, 3, 0}, {0, 0, 4}) == doctest::Approx(5.0));
}

TEST_CASE("hue offsets wrap to [-180, 180)") {
  CHECK(hue_offset(355, 0) == doctest::Approx(-5.0));
  CHECK(hue_offset(5, 355) == doctest::Approx(10.0));
  CHECK(hue_offset(180, 0) == doctest::Approx(-180.0));
  CHECK(hue_offset(240, 240) == doctest::Approx(0.0));
}

TEST_CASE("hue windows are inclusive") {
  CHECK(hue_in_window(350.0, 0.0, -10.0, 5.0));
  CHECK(hue_in_window(5.0, 0.0, -10.0, 5.0));
  CHECK_FALSE(hue_in_window(349.9, 0.0, -10.0, 5.0));
  CHECK_FALSE(hue_in_window(5.1, 0.0, -10.0, 5.0));
  CHECK(hue_in_window(232.0, 240.0, -10.0, 5.0));
  CHECK_FALSE(hue_in_window(0.0, 240.0, -10.0, 5.0));
}
