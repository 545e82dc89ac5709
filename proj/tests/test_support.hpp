#pragma once

// Generators and independent reference implementations shared by the test
// suites. Nothing here calls into the code path it is used to check.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "hsisteg/image.hpp"

namespace hsisteg::testing {

inline RgbImage random_image(std::size_t w, std::size_t h, std::mt19937_64& rng) {
  RgbImage img(w, h);
  for (auto& p : img) {
    const std::uint64_t v = rng();
    p = {std::uint8_t(v), std::uint8_t(v >> 8), std::uint8_t(v >> 16)};
  }
  return img;
}

/// Smooth gradients plus low-amplitude noise, loosely photograph-like.
inline RgbImage natural_image(std::size_t w, std::size_t h, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> phase(0.0, 6.28);
  std::uniform_real_distribution<double> freq(0.01, 0.08);
  std::normal_distribution<double> noise(0.0, 4.0);
  const std::array<double, 3> ph{phase(rng), phase(rng), phase(rng)};
  const std::array<double, 3> fx{freq(rng), freq(rng), freq(rng)};
  const std::array<double, 3> fy{freq(rng), freq(rng), freq(rng)};
  RgbImage img(w, h);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x) {
      std::array<std::uint8_t, 3> c{};
      for (int k = 0; k < 3; ++k) {
        const double v = 128 + 90 * std::sin(fx[k] * x + ph[k]) * std::cos(fy[k] * y) + 30.0 * y / h + noise(rng);
        c[k] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      }
      img.at(x, y) = {c[0], c[1], c[2]};
    }
  return img;
}

inline std::vector<std::uint8_t> random_bytes(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::uint8_t> out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng());
  return out;
}

/// Exhaustive search over |delta| <= 3 per channel for the pixel whose
/// round(sum/3) has the requested parity. Ordering: total |delta|, then
/// raising before lowering, then larger |dR|, then larger |dG|.
inline RgbPixel brute_force_enforce(RgbPixel p, bool bit) {
  using Key = std::tuple<int, int, int, int>;
  bool found = false;
  Key best_key{};
  RgbPixel best = p;
  for (int dr = -3; dr <= 3; ++dr)
    for (int dg = -3; dg <= 3; ++dg)
      for (int db = -3; db <= 3; ++db) {
        const int r = p.r + dr, g = p.g + dg, b = p.b + db;
        if (std::min({r, g, b}) < 0 || std::max({r, g, b}) > 255) continue;
        const double level = std::round((r + g + b) / 3.0);
        if ((static_cast<int>(level) % 2 == 1) != bit) continue;
        const int total = dr + dg + db;
        const Key key{std::abs(dr) + std::abs(dg) + std::abs(db), total > 0 ? 0 : (total < 0 ? 1 : -1),
                      -std::abs(dr), -std::abs(dg)};
        if (!found || key < best_key) {
          found = true;
          best_key = key;
          best = {std::uint8_t(r), std::uint8_t(g), std::uint8_t(b)};
        }
      }
  return best;
}

/// Straight double loop over (x, y, channel).
inline double naive_mse(const RgbImage& a, const RgbImage& b) {
  double total = 0.0;
  for (std::size_t y = 0; y < a.height(); ++y)
    for (std::size_t x = 0; x < a.width(); ++x) {
      const RgbPixel& p = a.at(x, y);
      const RgbPixel& q = b.at(x, y);
      const double d[3] = {double(p.r) - q.r, double(p.g) - q.g, double(p.b) - q.b};
      for (double v : d) total += v * v;
    }
  return total / (3.0 * double(a.width() * a.height()));
}

inline int max_channel_deviation(const RgbPixel& a, const RgbPixel& b) {
  return std::max({std::abs(a.r - b.r), std::abs(a.g - b.g), std::abs(a.b - b.b)});
}

/// Fresh scratch directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("hsisteg_" + tag + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace hsisteg::testing
