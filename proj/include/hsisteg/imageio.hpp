#pragma once

#include <png.h>

#include <algorithm>
#include <array>
#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hsisteg/image.hpp"

namespace hsisteg {

enum class ImageFormat { png, bmp };

constexpr std::string_view to_string(ImageFormat f) { return f == ImageFormat::png ? "png" : "bmp"; }

inline std::optional<ImageFormat> parse_image_format(std::string_view name) {
  if (name == "png") return ImageFormat::png;
  if (name == "bmp") return ImageFormat::bmp;
  return std::nullopt;
}

using Bytes = std::vector<std::uint8_t>;

namespace detail {

inline Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StegoError(ErrorKind::io_failure, "cannot open " + path.string());
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw StegoError(ErrorKind::io_failure, "cannot read " + path.string());
  return data;
}

inline void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw StegoError(ErrorKind::io_failure, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw StegoError(ErrorKind::io_failure, "cannot write " + path.string());
}

inline bool starts_with(std::span<const std::uint8_t> data, std::initializer_list<std::uint8_t> magic) {
  return data.size() >= magic.size() && std::equal(magic.begin(), magic.end(), data.begin());
}

// ---------------------------------------------------------------------------
// PNG. libpng reports fatal errors by longjmp; the two phases below keep only
// trivially destructible locals between setjmp and any libpng call.

struct PngSource {
  const std::uint8_t* data;
  std::size_t size;
  std::size_t pos;
};

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;
  PngSource source{};
  char message[256] = {};

  PngReader() = default;
  PngReader(const PngReader&) = delete;
  PngReader& operator=(const PngReader&) = delete;
  ~PngReader() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
  }
};

extern "C" inline void png_read_from_source(png_structp png, png_bytep out, png_size_t count) {
  auto* src = static_cast<PngSource*>(png_get_io_ptr(png));
  if (count > src->size - src->pos) png_error(png, "unexpected end of data");
  std::memcpy(out, src->data + src->pos, count);
  src->pos += count;
}

extern "C" inline void png_record_error(png_structp png, png_const_charp msg) {
  auto* reader = static_cast<PngReader*>(png_get_error_ptr(png));
  std::snprintf(reader->message, sizeof reader->message, "%s", msg);
  png_longjmp(png, 1);
}

extern "C" inline void png_ignore_warning(png_structp, png_const_charp) {}

enum class PngHeaderStatus { ok, corrupt, alpha, sixteen_bit };

struct PngShape {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
};

inline PngHeaderStatus png_read_header(PngReader* r, PngShape* shape) {
  if (setjmp(png_jmpbuf(r->png))) return PngHeaderStatus::corrupt;

  png_set_read_fn(r->png, &r->source, png_read_from_source);
  png_read_info(r->png, r->info);

  const int color_type = png_get_color_type(r->png, r->info);
  const int bit_depth = png_get_bit_depth(r->png, r->info);
  if (bit_depth == 16) return PngHeaderStatus::sixteen_bit;
  if ((color_type & PNG_COLOR_MASK_ALPHA) != 0 || png_get_valid(r->png, r->info, PNG_INFO_tRNS) != 0)
    return PngHeaderStatus::alpha;

  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(r->png);
  if (color_type == PNG_COLOR_TYPE_GRAY) {
    if (bit_depth < 8) png_set_expand_gray_1_2_4_to_8(r->png);
    png_set_gray_to_rgb(r->png);
  }
  png_set_interlace_handling(r->png);
  png_read_update_info(r->png, r->info);

  if (png_get_rowbytes(r->png, r->info) != std::size_t{png_get_image_width(r->png, r->info)} * 3)
    return PngHeaderStatus::corrupt;
  shape->width = png_get_image_width(r->png, r->info);
  shape->height = png_get_image_height(r->png, r->info);
  return PngHeaderStatus::ok;
}

inline bool png_read_pixels(PngReader* r, png_bytepp rows) {
  if (setjmp(png_jmpbuf(r->png))) return false;
  png_read_image(r->png, rows);
  png_read_end(r->png, nullptr);
  return true;
}

inline RgbImage decode_png(std::span<const std::uint8_t> data) {
  PngReader reader;
  reader.source = {data.data(), data.size(), 0};
  reader.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &reader, png_record_error, png_ignore_warning);
  if (!reader.png) throw StegoError(ErrorKind::io_failure, "libpng initialisation failed");
  reader.info = png_create_info_struct(reader.png);
  if (!reader.info) throw StegoError(ErrorKind::io_failure, "libpng initialisation failed");

  PngShape shape;
  switch (png_read_header(&reader, &shape)) {
    case PngHeaderStatus::ok: break;
    case PngHeaderStatus::corrupt: throw StegoError(ErrorKind::corrupt_file, reader.message);
    case PngHeaderStatus::alpha: throw StegoError(ErrorKind::alpha_not_supported, "PNG has an alpha channel");
    case PngHeaderStatus::sixteen_bit: throw StegoError(ErrorKind::unsupported_format, "16-bit PNG");
  }

  Bytes raw(std::size_t{shape.width} * shape.height * 3);
  std::vector<png_bytep> rows(shape.height);
  for (std::size_t y = 0; y < rows.size(); ++y) rows[y] = raw.data() + y * shape.width * 3;
  if (!png_read_pixels(&reader, rows.data())) throw StegoError(ErrorKind::corrupt_file, reader.message);

  std::vector<RgbPixel> pixels(std::size_t{shape.width} * shape.height);
  for (std::size_t k = 0; k < pixels.size(); ++k) pixels[k] = {raw[3 * k], raw[3 * k + 1], raw[3 * k + 2]};
  return RgbImage(shape.width, shape.height, std::move(pixels));
}

inline Bytes encode_png(const RgbImage& img) {
  if (img.empty()) throw StegoError(ErrorKind::io_failure, "PNG cannot hold an empty image");
  Bytes raw;
  raw.reserve(img.size() * 3);
  for (const RgbPixel& p : img) raw.insert(raw.end(), {p.r, p.g, p.b});

  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_RGB;

  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, raw.data(), 0, nullptr))
    throw StegoError(ErrorKind::io_failure, image.message);
  Bytes out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, raw.data(), 0, nullptr))
    throw StegoError(ErrorKind::io_failure, image.message);
  out.resize(size);
  return out;
}

// ---------------------------------------------------------------------------
// BMP. Reads uncompressed 1/4/8-bit palette, 24-bit and 32-bit images (the
// fourth byte of a BI_RGB 32-bit pixel is reserved and ignored); writes
// 24-bit bottom-up.

inline std::uint32_t le32(std::span<const std::uint8_t> d, std::size_t at) {
  if (at + 4 > d.size()) throw StegoError(ErrorKind::corrupt_file, "BMP header truncated");
  return std::uint32_t{d[at]} | std::uint32_t{d[at + 1]} << 8 | std::uint32_t{d[at + 2]} << 16 |
         std::uint32_t{d[at + 3]} << 24;
}

inline std::uint16_t le16(std::span<const std::uint8_t> d, std::size_t at) {
  if (at + 2 > d.size()) throw StegoError(ErrorKind::corrupt_file, "BMP header truncated");
  return static_cast<std::uint16_t>(d[at] | d[at + 1] << 8);
}

inline RgbImage decode_bmp(std::span<const std::uint8_t> d) {
  constexpr std::uint32_t kBiRgb = 0;
  constexpr std::uint32_t kBiBitfields = 3;

  const std::uint32_t pixel_offset = le32(d, 10);
  const std::uint32_t header_size = le32(d, 14);
  if (header_size < 40) throw StegoError(ErrorKind::unsupported_format, "BMP core header");

  const auto width = static_cast<std::int32_t>(le32(d, 18));
  const auto signed_height = static_cast<std::int32_t>(le32(d, 22));
  const std::uint16_t bpp = le16(d, 28);
  const std::uint32_t compression = le32(d, 30);
  const std::uint32_t colors_used = le32(d, 46);

  if (width <= 0 || signed_height == 0 || signed_height == INT32_MIN)
    throw StegoError(ErrorKind::corrupt_file, "BMP dimensions");
  const bool top_down = signed_height < 0;
  const std::size_t w = static_cast<std::size_t>(width);
  const std::size_t h = static_cast<std::size_t>(top_down ? -std::int64_t{signed_height} : signed_height);

  if (bpp == 32 && compression == kBiBitfields) {
    const std::uint32_t red = le32(d, 54), green = le32(d, 58), blue = le32(d, 62);
    if (header_size >= 56 && le32(d, 66) != 0) throw StegoError(ErrorKind::alpha_not_supported, "BMP alpha mask");
    if (red != 0x00FF0000u || green != 0x0000FF00u || blue != 0x000000FFu)
      throw StegoError(ErrorKind::unsupported_format, "BMP channel masks");
  } else if (compression != kBiRgb) {
    throw StegoError(ErrorKind::unsupported_format, "compressed BMP");
  }
  if (bpp != 1 && bpp != 4 && bpp != 8 && bpp != 24 && bpp != 32)
    throw StegoError(ErrorKind::unsupported_format, "BMP with " + std::to_string(bpp) + " bits per pixel");

  std::vector<RgbPixel> palette;
  if (bpp <= 8) {
    const std::size_t entries = colors_used ? colors_used : (std::size_t{1} << bpp);
    const std::size_t at = 14 + header_size;
    if (entries > 256 || at + entries * 4 > d.size()) throw StegoError(ErrorKind::corrupt_file, "BMP palette");
    for (std::size_t e = 0; e < entries; ++e)
      palette.push_back({d[at + 4 * e + 2], d[at + 4 * e + 1], d[at + 4 * e]});
  }

  const std::size_t stride = (w * bpp + 31) / 32 * 4;
  if (pixel_offset > d.size() || h > (d.size() - pixel_offset) / stride)
    throw StegoError(ErrorKind::corrupt_file, "BMP pixel data truncated");

  RgbImage img(w, h);
  for (std::size_t row = 0; row < h; ++row) {
    const std::uint8_t* src = d.data() + pixel_offset + row * stride;
    const std::size_t y = top_down ? row : h - 1 - row;
    for (std::size_t x = 0; x < w; ++x) {
      RgbPixel& out = img.at(x, y);
      if (bpp == 24 || bpp == 32) {
        const std::uint8_t* px = src + x * (bpp / 8);
        out = {px[2], px[1], px[0]};
      } else {
        const std::size_t bit = x * bpp;
        const unsigned index = (src[bit / 8] >> (8 - bpp - bit % 8)) & ((1u << bpp) - 1);
        if (index >= palette.size()) throw StegoError(ErrorKind::corrupt_file, "BMP palette index");
        out = palette[index];
      }
    }
  }
  return img;
}

inline Bytes encode_bmp(const RgbImage& img) {
  const std::size_t stride = (img.width() * 3 + 3) / 4 * 4;
  const std::size_t pixel_bytes = stride * img.height();
  if (img.width() > INT32_MAX || img.height() > INT32_MAX || 54 + pixel_bytes > UINT32_MAX)
    throw StegoError(ErrorKind::io_failure, "image too large for BMP");

  Bytes out(54 + pixel_bytes, 0);
  auto put32 = [&](std::size_t at, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out[at + i] = static_cast<std::uint8_t>(v >> (8 * i));
  };
  out[0] = 'B';
  out[1] = 'M';
  put32(2, static_cast<std::uint32_t>(out.size()));
  put32(10, 54);
  put32(14, 40);
  put32(18, static_cast<std::uint32_t>(img.width()));
  put32(22, static_cast<std::uint32_t>(img.height()));
  out[26] = 1;   // planes
  out[28] = 24;  // bits per pixel
  put32(34, static_cast<std::uint32_t>(pixel_bytes));
  put32(38, 2835);  // 72 dpi
  put32(42, 2835);

  for (std::size_t y = 0; y < img.height(); ++y) {
    std::uint8_t* dst = out.data() + 54 + (img.height() - 1 - y) * stride;
    for (std::size_t x = 0; x < img.width(); ++x) {
      const RgbPixel& p = img.at(x, y);
      dst[3 * x] = p.b;
      dst[3 * x + 1] = p.g;
      dst[3 * x + 2] = p.r;
    }
  }
  return out;
}

}  // namespace detail

/// Decodes PNG or BMP bytes, chosen by signature. JPEG, TIFF and anything
/// else are rejected: a lossy or unknown container cannot be trusted to keep
/// low bits intact.
inline RgbImage decode(std::span<const std::uint8_t> data) {
  using detail::starts_with;
  if (starts_with(data, {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A})) return detail::decode_png(data);
  if (starts_with(data, {'B', 'M'})) return detail::decode_bmp(data);
  if (starts_with(data, {0xFF, 0xD8, 0xFF})) throw StegoError(ErrorKind::unsupported_format, "JPEG");
  if (starts_with(data, {'I', 'I', 0x2A, 0x00}) || starts_with(data, {'M', 'M', 0x00, 0x2A}))
    throw StegoError(ErrorKind::unsupported_format, "TIFF");
  throw StegoError(ErrorKind::unsupported_format, "unrecognised image signature");
}

inline Bytes encode(const RgbImage& img, ImageFormat format) {
  return format == ImageFormat::png ? detail::encode_png(img) : detail::encode_bmp(img);
}

inline RgbImage load(const std::filesystem::path& path) {
  return decode(detail::read_file(path));
}

inline void save(const RgbImage& img, const std::filesystem::path& path, ImageFormat format = ImageFormat::png) {
  detail::write_file(path, encode(img, format));
}

}  // namespace hsisteg
