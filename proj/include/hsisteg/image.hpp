#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hsisteg/error.hpp"

namespace hsisteg {

struct RgbPixel {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend constexpr bool operator==(const RgbPixel&, const RgbPixel&) = default;
};

enum class Channel { r, g, b };

constexpr std::uint8_t channel_value(const RgbPixel& p, Channel c) {
  switch (c) {
    case Channel::r: return p.r;
    case Channel::g: return p.g;
    case Channel::b: return p.b;
  }
  return 0;
}

constexpr int channel_sum(const RgbPixel& p) { return int{p.r} + int{p.g} + int{p.b}; }

/// Row-major pixel grid with a top-left origin. Pixel index k maps to
/// (x, y) = (k % width, k / width); this is the raster order every
/// embedding method walks.
template <class Pixel>
class Image {
 public:
  using pixel_type = Pixel;

  Image() = default;
  Image(std::size_t width, std::size_t height, Pixel fill = Pixel{})
      : width_(width), height_(height), pixels_(width * height, fill) {}
  Image(std::size_t width, std::size_t height, std::vector<Pixel> pixels)
      : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (pixels_.size() != width_ * height_)
      throw StegoError(ErrorKind::dimension_mismatch, "pixel count does not match width x height");
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }
  bool empty() const noexcept { return pixels_.empty(); }

  Pixel& operator[](std::size_t k) { return pixels_[k]; }
  const Pixel& operator[](std::size_t k) const { return pixels_[k]; }
  Pixel& at(std::size_t x, std::size_t y) { return pixels_[y * width_ + x]; }
  const Pixel& at(std::size_t x, std::size_t y) const { return pixels_[y * width_ + x]; }

  std::span<Pixel> pixels() noexcept { return pixels_; }
  std::span<const Pixel> pixels() const noexcept { return pixels_; }

  auto begin() noexcept { return pixels_.begin(); }
  auto end() noexcept { return pixels_.end(); }
  auto begin() const noexcept { return pixels_.begin(); }
  auto end() const noexcept { return pixels_.end(); }

  bool same_shape(const Image& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<Pixel> pixels_;
};

using RgbImage = Image<RgbPixel>;

/// Applies `fn` to every pixel of `src`, preserving dimensions.
template <class Fn, class Pixel>
auto map_pixels(const Image<Pixel>& src, Fn&& fn) {
  using Out = std::decay_t<decltype(fn(src[0]))>;
  std::vector<Out> out;
  out.reserve(src.size());
  for (const auto& p : src) out.push_back(fn(p));
  return Image<Out>(src.width(), src.height(), std::move(out));
}

}  // namespace hsisteg
