#pragma once

#include "ctrack/image.hpp"

namespace ctrack {

/// Hexcone HSV. h in degrees [0, 360), s and v on the 8-bit scale [0, 255].
/// Achromatic pixels get h = 0.
struct Hsv {
  double h = 0.0;
  double s = 0.0;
  double v = 0.0;
};

Hsv rgb_to_hsv(Rgb p);
/// Rounds each channel to nearest.
Rgb hsv_to_rgb(const Hsv& hsv);

/// CIE L*a*b* under D65 from sRGB.
struct Lab {
  double l = 0.0;
  double a = 0.0;
  double b = 0.0;
};

Lab rgb_to_lab(Rgb p);
double delta_e(const Lab& x, const Lab& y);

/// Signed hue offset of h from center, wrapped into [-180, 180).
double hue_offset(double h, double center);

/// true if hue lies within [center + low, center + high] modulo 360.
bool hue_in_window(double h, double center, double low, double high);

}  // namespace ctrack
