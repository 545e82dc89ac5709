#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hsisteg/image.hpp"

namespace hsisteg {

/// Storage resolution of the hue and saturation planes. Intensity is always
/// an integer level in [0,255] because embedding flips its low bit.
///
/// Hue is held as an integer count of 1/hue_steps_per_degree degrees and
/// saturation as an integer count of 1/saturation_steps_per_percent percent.
/// The grid decides how much colour a reconversion loses: the unit grid
/// (1 degree, 1 percent) moves a channel by up to 4 levels after
/// RGB -> HSI -> RGB, the tenth grid by at most 1.
struct HsiGrid {
  int hue_steps_per_degree = 10;
  int saturation_steps_per_percent = 10;

  constexpr int hue_steps() const { return 360 * hue_steps_per_degree; }
  constexpr int saturation_steps() const { return 100 * saturation_steps_per_percent; }
  friend constexpr bool operator==(const HsiGrid&, const HsiGrid&) = default;
};

inline constexpr HsiGrid kTenthGrid{10, 10};
inline constexpr HsiGrid kUnitGrid{1, 1};
inline constexpr HsiGrid kDefaultGrid = kTenthGrid;

/// Quantized HSI triple on grid `Grid`.
template <HsiGrid Grid = kDefaultGrid>
struct BasicHsiPixel {
  static constexpr HsiGrid grid = Grid;

  int hue = 0;         // [0, Grid.hue_steps())
  int saturation = 0;  // [0, Grid.saturation_steps()]
  int intensity = 0;   // [0, 255]

  constexpr double hue_degrees() const { return double(hue) / Grid.hue_steps_per_degree; }
  constexpr double saturation_percent() const {
    return double(saturation) / Grid.saturation_steps_per_percent;
  }

  friend constexpr bool operator==(const BasicHsiPixel&, const BasicHsiPixel&) = default;
};

using HsiPixel = BasicHsiPixel<>;

template <HsiGrid Grid = kDefaultGrid>
using HsiImage = Image<BasicHsiPixel<Grid>>;

/// Chromaticity coordinates r + g + b = 1. Pure black has no chromaticity;
/// it is mapped to the white point (1/3, 1/3, 1/3).
struct NormalizedRgb {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;
};

/// Unquantized HSI: hue in radians [0, 2pi), saturation and intensity in [0, 1].
struct ContinuousHsi {
  double hue = 0.0;
  double saturation = 0.0;
  double intensity = 0.0;
};

inline NormalizedRgb normalize(const RgbPixel& p) {
  const int sum = channel_sum(p);
  if (sum == 0) return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  const double total = sum;
  return {p.r / total, p.g / total, p.b / total};
}

/// Intensity level round((R+G+B)/3). The sum is an integer, so the quotient
/// is never exactly half way between two levels.
constexpr int intensity_level(const RgbPixel& p) { return (channel_sum(p) + 1) / 3; }

inline ContinuousHsi to_continuous_hsi(const RgbPixel& p) {
  constexpr double pi = std::numbers::pi;
  const NormalizedRgb n = normalize(p);

  ContinuousHsi out;
  out.intensity = channel_sum(p) / (3.0 * 255.0);

  const double rg = n.r - n.g;
  const double rb = n.r - n.b;
  const double gb = n.g - n.b;
  const double den = std::sqrt(rg * rg + rb * gb);
  // den == 0 only for r == g == b, where hue is undefined.
  if (den > 0.0) {
    const double ratio = std::clamp(0.5 * (rg + rb) / den, -1.0, 1.0);
    const double theta = std::acos(ratio);
    out.hue = (p.b <= p.g) ? theta : 2.0 * pi - theta;
  }

  out.saturation = std::clamp(1.0 - 3.0 * std::min({n.r, n.g, n.b}), 0.0, 1.0);
  return out;
}

template <HsiGrid Grid = kDefaultGrid>
BasicHsiPixel<Grid> rgb_to_hsi(const RgbPixel& p) {
  constexpr double pi = std::numbers::pi;
  const ContinuousHsi c = to_continuous_hsi(p);

  BasicHsiPixel<Grid> out;
  out.intensity = intensity_level(p);
  out.saturation = static_cast<int>(std::lround(c.saturation * 100.0 * Grid.saturation_steps_per_percent));
  out.hue = static_cast<int>(std::lround(c.hue * 180.0 / pi * Grid.hue_steps_per_degree));
  if (out.hue >= Grid.hue_steps()) out.hue -= Grid.hue_steps();
  if (out.saturation == 0) out.hue = 0;
  return out;
}

namespace detail {

inline std::uint8_t to_channel(double normalized) {
  return static_cast<std::uint8_t>(std::clamp(std::round(normalized * 255.0), 0.0, 255.0));
}

}  // namespace detail

/// Inverse transform. The hue circle is split into three 120 degree
/// sectors; within each, (x, y, z) are assigned to the channels rotated one
/// step from the previous sector:
///   [0,120)   -> (b, r, g)
///   [120,240) -> (r, g, b)
///   [240,360) -> (g, b, r)
/// Triples that were never produced from an RGB pixel can land outside the
/// gamut; they are clamped.
template <HsiGrid Grid>
RgbPixel hsi_to_rgb(const BasicHsiPixel<Grid>& p) {
  constexpr double pi = std::numbers::pi;
  constexpr int sector_width = 120 * Grid.hue_steps_per_degree;

  int hue = p.hue % Grid.hue_steps();
  if (hue < 0) hue += Grid.hue_steps();
  const int sector = hue / sector_width;
  const double h = double(hue - sector * sector_width) / Grid.hue_steps_per_degree * pi / 180.0;
  const double s = double(p.saturation) / Grid.saturation_steps();
  const double i = double(p.intensity) / 255.0;

  const double x = i * (1.0 - s);
  const double y = i * (1.0 + s * std::cos(h) / std::cos(pi / 3.0 - h));
  const double z = 3.0 * i - (x + y);

  double r = 0, g = 0, b = 0;
  switch (sector) {
    case 0: b = x; r = y; g = z; break;
    case 1: r = x; g = y; b = z; break;
    default: g = x; b = y; r = z; break;
  }
  return {detail::to_channel(r), detail::to_channel(g), detail::to_channel(b)};
}

template <HsiGrid Grid = kDefaultGrid>
HsiImage<Grid> rgb_image_to_hsi(const RgbImage& img) {
  return map_pixels(img, [](const RgbPixel& p) { return rgb_to_hsi<Grid>(p); });
}

template <HsiGrid Grid>
RgbImage hsi_image_to_rgb(const HsiImage<Grid>& img) {
  return map_pixels(img, [](const BasicHsiPixel<Grid>& p) { return hsi_to_rgb(p); });
}

}  // namespace hsisteg
