#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "hsisteg/image.hpp"

namespace hsisteg {

/// Peak value used in PSNR. `observed` takes the largest channel value found
/// in either image; `fixed255` is the usual 8-bit convention.
enum class PeakMode { observed, fixed255 };

struct QualityReport {
  double mse = 0.0;
  double psnr_db = std::numeric_limits<double>::infinity();  // +inf when mse == 0
  int c_max = 0;

  bool identical() const noexcept { return mse == 0.0; }
};

struct ChannelHistogram {
  Channel channel = Channel::r;
  std::array<std::uint64_t, 256> bins{};
};

namespace detail {

inline void require_same_shape(const RgbImage& a, const RgbImage& b) {
  if (!a.same_shape(b))
    throw StegoError(ErrorKind::dimension_mismatch,
                     std::to_string(a.width()) + "x" + std::to_string(a.height()) + " vs " +
                         std::to_string(b.width()) + "x" + std::to_string(b.height()));
}

inline std::uint64_t squared_error_sum(const RgbImage& a, const RgbImage& b) {
  std::uint64_t total = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const int dr = int{a[k].r} - int{b[k].r};
    const int dg = int{a[k].g} - int{b[k].g};
    const int db = int{a[k].b} - int{b[k].b};
    total += static_cast<std::uint64_t>(dr * dr + dg * dg + db * db);
  }
  return total;
}

}  // namespace detail

/// Mean squared error over all pixels and all three channels. An empty pair
/// has no error.
inline double mse(const RgbImage& cover, const RgbImage& stego) {
  detail::require_same_shape(cover, stego);
  if (cover.empty()) return 0.0;
  return double(detail::squared_error_sum(cover, stego)) / (3.0 * double(cover.size()));
}

inline int max_channel_value(const RgbImage& img) {
  int peak = 0;
  for (const RgbPixel& p : img) peak = std::max({peak, int{p.r}, int{p.g}, int{p.b}});
  return peak;
}

inline QualityReport psnr(const RgbImage& cover, const RgbImage& stego, PeakMode peak = PeakMode::observed) {
  QualityReport report;
  report.mse = mse(cover, stego);
  report.c_max = peak == PeakMode::fixed255 ? 255 : std::max(max_channel_value(cover), max_channel_value(stego));
  if (report.mse > 0.0)
    report.psnr_db = 10.0 * std::log10(double(report.c_max) * double(report.c_max) / report.mse);
  return report;
}

inline ChannelHistogram histogram(const RgbImage& img, Channel channel) {
  ChannelHistogram h{channel, {}};
  for (const RgbPixel& p : img) ++h.bins[channel_value(p, channel)];
  return h;
}

// CSV helpers.

constexpr std::string_view channel_name(Channel c) {
  switch (c) {
    case Channel::r: return "R";
    case Channel::g: return "G";
    case Channel::b: return "B";
  }
  return "?";
}

/// Shortest round-trip decimal form; "inf" for the lossless sentinel.
inline std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

inline constexpr std::string_view kQualityCsvHeader = "image,method,payload_bytes,mse,psnr_db,c_max";

/// One CSV row in kQualityCsvHeader column order, without a newline. Fields
/// are written verbatim; callers pass names without commas or quotes.
inline std::string quality_csv_row(std::string_view image, std::string_view method, std::string_view payload_bytes,
                                   const QualityReport& report) {
  std::string row;
  row.append(image).append(",").append(method).append(",").append(payload_bytes).append(",");
  row.append(format_real(report.mse)).append(",").append(format_real(report.psnr_db)).append(",");
  row.append(std::to_string(report.c_max));
  return row;
}

/// 256 data rows of value,count under a header line.
inline std::string histogram_csv(const ChannelHistogram& h) {
  std::string out = "value,count\n";
  for (std::size_t v = 0; v < h.bins.size(); ++v)
    out.append(std::to_string(v)).append(",").append(std::to_string(h.bins[v])).append("\n");
  return out;
}

}  // namespace hsisteg
