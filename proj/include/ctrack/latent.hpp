#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>
#include <vector>

#include "ctrack/errors.hpp"

namespace ctrack {

using Index = Eigen::Index;

/// (frames, height, width, channels), C-order with channels fastest.
struct Shape {
  Index frames = 0;
  Index height = 0;
  Index width = 0;
  Index channels = 0;

  Index size() const { return frames * height * width * channels; }
  Index pixels() const { return frames * height * width; }
  bool operator==(const Shape&) const = default;
};

/// Dense sampler state. The shape is fixed at construction; the coefficient
/// view is exposed as a non-resizable map so expression code can work on it
/// without ever changing the shape.
template <typename Scalar_>
class LatentVideo {
 public:
  using Scalar = Scalar_;
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
  using MapType = Eigen::Map<Array>;
  using ConstMapType = Eigen::Map<const Array>;

  LatentVideo() = default;

  explicit LatentVideo(const Shape& shape) : shape_(shape), data_(Array::Zero(shape.size())) {
    check_shape(shape);
  }

  template <typename Derived>
  LatentVideo(const Shape& shape, const Eigen::ArrayBase<Derived>& values) : shape_(shape), data_(values) {
    check_shape(shape);
    if (data_.size() != shape.size()) throw InvalidArgument("LatentVideo: value count does not match shape");
  }

  static LatentVideo Zero(const Shape& shape) { return LatentVideo(shape); }

  static LatentVideo Constant(const Shape& shape, Scalar value) {
    return LatentVideo(shape, Array::Constant(shape.size(), value));
  }

  template <typename Rng>
  static LatentVideo Randn(const Shape& shape, Rng& rng) {
    LatentVideo out(shape);
    std::normal_distribution<Scalar> normal(Scalar(0), Scalar(1));
    for (Index i = 0; i < out.data_.size(); ++i) out.data_[i] = normal(rng);
    return out;
  }

  const Shape& shape() const { return shape_; }
  Index size() const { return data_.size(); }

  MapType array() { return MapType(data_.data(), data_.size()); }
  ConstMapType array() const { return ConstMapType(data_.data(), data_.size()); }

  Scalar* data() { return data_.data(); }
  const Scalar* data() const { return data_.data(); }

  Index offset(Index f, Index y, Index x, Index c) const {
    return ((f * shape_.height + y) * shape_.width + x) * shape_.channels + c;
  }
  Scalar& operator()(Index f, Index y, Index x, Index c) { return data_[offset(f, y, x, c)]; }
  Scalar operator()(Index f, Index y, Index x, Index c) const { return data_[offset(f, y, x, c)]; }

  bool all_finite() const { return data_.allFinite(); }

  template <typename Other>
  LatentVideo<Other> cast() const {
    return LatentVideo<Other>(shape_, data_.template cast<Other>());
  }

 private:
  static void check_shape(const Shape& s) {
    if (s.frames < 0 || s.height < 0 || s.width < 0 || s.channels < 0)
      throw InvalidArgument("LatentVideo: negative dimension");
  }

  Shape shape_;
  Array data_;
};

using LatentVideof = LatentVideo<float>;
using LatentVideod = LatentVideo<double>;

template <typename A, typename B>
void require_same_shape(const LatentVideo<A>& a, const LatentVideo<B>& b, const char* where) {
  if (!(a.shape() == b.shape())) throw InvalidArgument(std::string(where) + ": shape mismatch");
}

/// Binary (F, H, W) mask; 1 marks cells the sampler may change.
class SpatioTemporalMask {
 public:
  SpatioTemporalMask() = default;
  SpatioTemporalMask(Index frames, Index height, Index width, bool value = false)
      : frames_(frames), height_(height), width_(width),
        cells_(static_cast<std::size_t>(frames * height * width), value ? 1 : 0) {}

  static SpatioTemporalMask Ones(Index f, Index h, Index w) { return {f, h, w, true}; }

  Index frames() const { return frames_; }
  Index height() const { return height_; }
  Index width() const { return width_; }
  Index size() const { return static_cast<Index>(cells_.size()); }

  bool operator()(Index f, Index y, Index x) const { return cells_[index(f, y, x)] != 0; }
  void set(Index f, Index y, Index x, bool value) { cells_[index(f, y, x)] = value ? 1 : 0; }
  bool at_flat(Index i) const { return cells_[static_cast<std::size_t>(i)] != 0; }

  Index count() const {
    Index n = 0;
    for (auto c : cells_) n += c;
    return n;
  }

  bool matches(const Shape& s) const { return s.frames == frames_ && s.height == height_ && s.width == width_; }
  bool operator==(const SpatioTemporalMask&) const = default;

 private:
  std::size_t index(Index f, Index y, Index x) const {
    return static_cast<std::size_t>((f * height_ + y) * width_ + x);
  }

  Index frames_ = 0;
  Index height_ = 0;
  Index width_ = 0;
  std::vector<std::uint8_t> cells_;
};

}  // namespace ctrack
