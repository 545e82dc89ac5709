#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hsisteg/codec.hpp"
#include "hsisteg/colorspace.hpp"
#include "hsisteg/image.hpp"

namespace hsisteg {

enum class Method { hsi, lsb, karim };

inline constexpr std::array<Method, 3> kAllMethods{Method::hsi, Method::lsb, Method::karim};

constexpr std::string_view to_string(Method m) {
  switch (m) {
    case Method::hsi: return "hsi";
    case Method::lsb: return "lsb";
    case Method::karim: return "karim";
  }
  return "?";
}

inline std::optional<Method> parse_method(std::string_view name) {
  for (Method m : kAllMethods)
    if (to_string(m) == name) return m;
  return std::nullopt;
}

/// Carrier bits available in a width x height cover.
constexpr std::size_t slot_count(Method m, std::size_t width, std::size_t height) {
  return (m == Method::lsb ? 3 : 1) * width * height;
}

constexpr std::size_t capacity_bytes(Method m, std::size_t width, std::size_t height) {
  return capacity_for_slots(slot_count(m, width, height));
}

/// Key bits are cycled over pixel index: pixel k uses bit k mod size().
class StegoKey {
 public:
  explicit StegoKey(std::vector<bool> bits) : bits_(std::move(bits)) {
    if (bits_.empty()) throw StegoError(ErrorKind::invalid_argument, "stego key must hold at least one bit");
  }

  /// Expands bytes most significant bit first.
  static StegoKey from_bytes(std::span<const std::uint8_t> bytes) {
    std::vector<bool> bits;
    bits.reserve(bytes.size() * 8);
    for (std::uint8_t byte : bytes)
      for (int bit = 7; bit >= 0; --bit) bits.push_back((byte >> bit) & 1u);
    return StegoKey(std::move(bits));
  }

  bool bit_for_pixel(std::size_t k) const { return bits_[k % bits_.size()]; }
  std::size_t size() const noexcept { return bits_.size(); }
  const std::vector<bool>& bits() const noexcept { return bits_; }

  friend bool operator==(const StegoKey&, const StegoKey&) = default;

 private:
  std::vector<bool> bits_;
};

struct EmbedResult {
  RgbImage stego;
  std::size_t bits_embedded = 0;
  std::size_t pixels_adjusted = 0;
};

namespace detail {

inline void require_slots(const BitStream& bits, std::size_t slots) {
  if (bits.size() > slots)
    throw StegoError(ErrorKind::insufficient_capacity,
                     std::to_string(bits.size()) + " bits needed, " + std::to_string(slots) +
                         " available (" + std::to_string(capacity_for_slots(slots)) + " bytes max)");
}

constexpr std::uint8_t with_lsb(std::uint8_t v, bool bit) {
  return static_cast<std::uint8_t>((v & 0xFEu) | (bit ? 1u : 0u));
}

}  // namespace detail

/// Smallest change to `p` (by total absolute channel delta) after which
/// round((R+G+B)/3) has low bit `bit`. Ties prefer raising the sum over
/// lowering it; the delta is then pushed into R first, then G, then B, as far
/// as each channel's range allows. Returns `p` unchanged when the bit already
/// holds.
///
/// Only the channel sum matters, and the sums mapping to intensity I are
/// 3I-1..3I+1, so the nearest sum with the other parity is 1..3 away upward
/// (target 3I+2) or downward (target 3I-2).
inline RgbPixel enforce_intensity_lsb(RgbPixel p, bool bit) {
  const int sum = channel_sum(p);
  const int level = intensity_level(p);
  if (((level & 1) != 0) == bit) return p;

  const bool can_raise = level <= 254;
  const bool can_lower = level >= 1;
  const int up = 3 * level + 2 - sum;
  const int down = sum - (3 * level - 2);
  const bool raise = can_raise && (!can_lower || up <= down);
  int remaining = raise ? up : down;

  for (std::uint8_t* c : {&p.r, &p.g, &p.b}) {
    const int room = raise ? 255 - *c : *c;
    const int step = std::min(room, remaining);
    *c = static_cast<std::uint8_t>(raise ? *c + step : *c - step);
    remaining -= step;
  }
  return p;
}

/// I-plane embedding: RGB -> HSI, replace the intensity LSB of pixel k with
/// frame bit k, HSI -> RGB, then repair every carrying pixel whose rounded
/// reconversion no longer reproduces its bit. Pixels past the frame are
/// reconverted but not repaired.
template <HsiGrid Grid = kDefaultGrid>
EmbedResult embed_hsi(const RgbImage& cover, std::span<const std::uint8_t> payload) {
  const BitStream bits = frame(payload);
  detail::require_slots(bits, cover.size());

  HsiImage<Grid> plane = rgb_image_to_hsi<Grid>(cover);
  for (std::size_t k = 0; k < bits.size(); ++k)
    plane[k].intensity = (plane[k].intensity & ~1) | (bits[k] ? 1 : 0);

  EmbedResult result{hsi_image_to_rgb(plane), bits.size(), 0};
  for (std::size_t k = 0; k < bits.size(); ++k) {
    const RgbPixel fixed = enforce_intensity_lsb(result.stego[k], bits[k]);
    if (fixed != result.stego[k]) {
      result.stego[k] = fixed;
      ++result.pixels_adjusted;
    }
  }
  return result;
}

inline Payload extract_hsi(const RgbImage& stego) {
  BitStream bits;
  bits.reserve(stego.size());
  for (const RgbPixel& p : stego) bits.push_back(intensity_level(p) & 1);
  return deframe(bits);
}

/// Channel-LSB substitution, slots walked R, G, B within each pixel.
inline EmbedResult embed_lsb_plain(const RgbImage& cover, std::span<const std::uint8_t> payload) {
  const BitStream bits = frame(payload);
  detail::require_slots(bits, slot_count(Method::lsb, cover.width(), cover.height()));

  EmbedResult result{cover, bits.size(), 0};
  for (std::size_t slot = 0; slot < bits.size(); ++slot) {
    RgbPixel& p = result.stego[slot / 3];
    std::uint8_t& c = slot % 3 == 0 ? p.r : (slot % 3 == 1 ? p.g : p.b);
    c = detail::with_lsb(c, bits[slot]);
  }
  return result;
}

inline Payload extract_lsb_plain(const RgbImage& stego) {
  BitStream bits;
  bits.reserve(stego.size() * 3);
  for (const RgbPixel& p : stego) {
    bits.push_back(p.r & 1);
    bits.push_back(p.g & 1);
    bits.push_back(p.b & 1);
  }
  return deframe(bits);
}

/// LSB(R) xor key bit selects the carrier channel: 0 -> blue, 1 -> green.
/// Red is never written, so the selection is reproducible at extraction.
constexpr bool karim_uses_green(const RgbPixel& p, bool key_bit) { return ((p.r & 1) != 0) != key_bit; }

inline EmbedResult embed_karim(const RgbImage& cover, std::span<const std::uint8_t> payload,
                               const StegoKey& key) {
  const BitStream bits = frame(payload);
  detail::require_slots(bits, cover.size());

  EmbedResult result{cover, bits.size(), 0};
  for (std::size_t k = 0; k < bits.size(); ++k) {
    RgbPixel& p = result.stego[k];
    if (karim_uses_green(p, key.bit_for_pixel(k)))
      p.g = detail::with_lsb(p.g, bits[k]);
    else
      p.b = detail::with_lsb(p.b, bits[k]);
  }
  return result;
}

inline Payload extract_karim(const RgbImage& stego, const StegoKey& key) {
  BitStream bits;
  bits.reserve(stego.size());
  for (std::size_t k = 0; k < stego.size(); ++k) {
    const RgbPixel& p = stego[k];
    bits.push_back((karim_uses_green(p, key.bit_for_pixel(k)) ? p.g : p.b) & 1);
  }
  return deframe(bits);
}

namespace detail {

inline const StegoKey& require_key(const std::optional<StegoKey>& key) {
  if (!key) throw StegoError(ErrorKind::invalid_argument, "method karim requires a key");
  return *key;
}

}  // namespace detail

/// Method dispatch. `key` is required for karim and ignored otherwise.
template <HsiGrid Grid = kDefaultGrid>
EmbedResult embed(Method method, const RgbImage& cover, std::span<const std::uint8_t> payload,
                  const std::optional<StegoKey>& key = std::nullopt) {
  switch (method) {
    case Method::hsi: return embed_hsi<Grid>(cover, payload);
    case Method::lsb: return embed_lsb_plain(cover, payload);
    case Method::karim: return embed_karim(cover, payload, detail::require_key(key));
  }
  throw StegoError(ErrorKind::invalid_argument, "unknown method");
}

inline Payload extract(Method method, const RgbImage& stego, const std::optional<StegoKey>& key = std::nullopt) {
  switch (method) {
    case Method::hsi: return extract_hsi(stego);
    case Method::lsb: return extract_lsb_plain(stego);
    case Method::karim: return extract_karim(stego, detail::require_key(key));
  }
  throw StegoError(ErrorKind::invalid_argument, "unknown method");
}

}  // namespace hsisteg
