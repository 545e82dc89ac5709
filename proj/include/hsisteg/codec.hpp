#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "hsisteg/error.hpp"

namespace hsisteg {

using Payload = std::vector<std::uint8_t>;

/// Ordered bit sequence. Frame layout on the wire:
///
///   bits [0, 32)        payload byte length, unsigned, big-endian (MSB first)
///   bits [32, 32 + 8n)  payload bytes in order, each most significant bit first
///
/// There is no checksum and no trailing marker.
class BitStream {
 public:
  BitStream() = default;
  explicit BitStream(std::vector<bool> bits) : bits_(std::move(bits)) {}

  void push_back(bool bit) { bits_.push_back(bit); }
  void reserve(std::size_t n) { bits_.reserve(n); }
  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }
  bool operator[](std::size_t k) const { return bits_[k]; }

  auto begin() const noexcept { return bits_.begin(); }
  auto end() const noexcept { return bits_.end(); }

  friend bool operator==(const BitStream&, const BitStream&) = default;

 private:
  std::vector<bool> bits_;
};

inline constexpr std::size_t kHeaderBits = 32;
inline constexpr std::uint64_t kMaxPayloadBytes = std::numeric_limits<std::uint32_t>::max();

constexpr std::size_t framed_bits(std::size_t payload_bytes) { return kHeaderBits + 8 * payload_bytes; }

inline BitStream frame(std::span<const std::uint8_t> payload) {
  if (payload.size() > kMaxPayloadBytes)
    throw StegoError(ErrorKind::payload_too_large, std::to_string(payload.size()) + " bytes");

  BitStream out;
  out.reserve(framed_bits(payload.size()));
  const auto length = static_cast<std::uint32_t>(payload.size());
  for (int bit = 31; bit >= 0; --bit) out.push_back((length >> bit) & 1u);
  for (std::uint8_t byte : payload)
    for (int bit = 7; bit >= 0; --bit) out.push_back((byte >> bit) & 1u);
  return out;
}

/// Reads one frame from the start of `bits`. Bits after the frame are ignored,
/// so a whole carrier's worth of extracted bits can be passed directly.
inline Payload deframe(const BitStream& bits) {
  if (bits.size() < kHeaderBits)
    throw StegoError(ErrorKind::truncated_stream,
                     "header needs 32 bits, stream has " + std::to_string(bits.size()));

  std::uint64_t length = 0;
  for (std::size_t k = 0; k < kHeaderBits; ++k) length = (length << 1) | std::uint64_t{bits[k]};

  if ((bits.size() - kHeaderBits) / 8 < length)
    throw StegoError(ErrorKind::truncated_stream,
                     "header declares " + std::to_string(length) + " bytes, stream holds " +
                         std::to_string((bits.size() - kHeaderBits) / 8));

  Payload out(static_cast<std::size_t>(length));
  std::size_t k = kHeaderBits;
  for (auto& byte : out) {
    std::uint8_t v = 0;
    for (int bit = 0; bit < 8; ++bit) v = static_cast<std::uint8_t>((v << 1) | bits[k++]);
    byte = v;
  }
  return out;
}

/// Largest payload whose frame fits in `slots` carrier bits.
constexpr std::size_t capacity_for_slots(std::size_t slots) {
  return slots < kHeaderBits ? 0 : (slots - kHeaderBits) / 8;
}

/// Payload capacity at one carried bit per pixel.
constexpr std::size_t capacity_bytes(std::size_t width, std::size_t height) {
  return capacity_for_slots(width * height);
}

}  // namespace hsisteg
