#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "ctrack/errors.hpp"
#include "ctrack/latent.hpp"

namespace ctrack {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  bool operator==(const Rgb&) const = default;
};

static_assert(sizeof(Rgb) == 3, "Rgb must be tightly packed");

/// 8-bit RGB frame, row-major. Pixel (x, y) is column x, row y; pixel centers
/// sit on integer coordinates.
class Image {
 public:
  Image() = default;
  Image(int width, int height, Rgb fill = {})
      : width_(width), height_(height), pixels_(static_cast<std::size_t>(checked(width) * checked(height)), fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return pixels_.empty(); }
  bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  Rgb& at(int x, int y) { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  const Rgb& at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }

  std::vector<Rgb>& pixels() { return pixels_; }
  const std::vector<Rgb>& pixels() const { return pixels_; }

  bool operator==(const Image&) const = default;

 private:
  static int checked(int n) {
    if (n < 0) throw InvalidArgument("Image: negative dimension");
    return n;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<Rgb> pixels_;
};

/// F x H x W x 3 video of 8-bit frames.
class VideoTensor {
 public:
  VideoTensor() = default;
  explicit VideoTensor(std::vector<Image> frames) : frames_(std::move(frames)) {
    for (const auto& f : frames_) {
      if (f.width() != frames_.front().width() || f.height() != frames_.front().height())
        throw InvalidArgument("VideoTensor: frames differ in size");
    }
  }
  VideoTensor(int frames, int width, int height, Rgb fill = {})
      : frames_(static_cast<std::size_t>(frames), Image(width, height, fill)) {}

  int frames() const { return static_cast<int>(frames_.size()); }
  int width() const { return frames_.empty() ? 0 : frames_.front().width(); }
  int height() const { return frames_.empty() ? 0 : frames_.front().height(); }
  bool empty() const { return frames_.empty(); }

  Image& frame(int k) { return frames_.at(static_cast<std::size_t>(k)); }
  const Image& frame(int k) const { return frames_.at(static_cast<std::size_t>(k)); }
  std::vector<Image>& frame_list() { return frames_; }
  const std::vector<Image>& frame_list() const { return frames_; }

  Shape latent_shape() const { return {frames(), height(), width(), 3}; }

  bool operator==(const VideoTensor&) const = default;

 private:
  std::vector<Image> frames_;
};

/// Maps 8-bit values onto [-1, 1].
template <typename Scalar>
LatentVideo<Scalar> to_latent(const VideoTensor& video) {
  LatentVideo<Scalar> out(video.latent_shape());
  Scalar* dst = out.data();
  for (const auto& frame : video.frame_list()) {
    for (const Rgb& p : frame.pixels()) {
      *dst++ = Scalar(p.r) / Scalar(127.5) - Scalar(1);
      *dst++ = Scalar(p.g) / Scalar(127.5) - Scalar(1);
      *dst++ = Scalar(p.b) / Scalar(127.5) - Scalar(1);
    }
  }
  return out;
}

/// Inverse of to_latent with clamping to [-1, 1] and rounding to nearest.
template <typename Scalar>
VideoTensor from_latent(const LatentVideo<Scalar>& latent) {
  const Shape& s = latent.shape();
  if (s.channels != 3) throw InvalidArgument("from_latent: expected 3 channels");
  if (!latent.all_finite()) throw NumericError("from_latent: non-finite latent");
  VideoTensor out(static_cast<int>(s.frames), static_cast<int>(s.width), static_cast<int>(s.height));
  const Scalar* src = latent.data();
  auto quantize = [](Scalar v) {
    const double c = std::clamp(static_cast<double>(v), -1.0, 1.0);
    return static_cast<std::uint8_t>(std::lround((c + 1.0) * 127.5));
  };
  for (auto& frame : out.frame_list()) {
    for (Rgb& p : frame.pixels()) {
      p.r = quantize(*src++);
      p.g = quantize(*src++);
      p.b = quantize(*src++);
    }
  }
  return out;
}

}  // namespace ctrack
