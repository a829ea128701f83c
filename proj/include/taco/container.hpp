#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "taco/common.hpp"

namespace taco {

// Bitstream container, little-endian:
//   magic "TACB" | version u8 | codec_id u8 | flags u8 | width u16 |
//   height u16 | channels u8 | quality u8 | metadata_len u16 |
//   metadata JSON | payload_len u32 | payload
// width/height are the coded (padded) dimensions; the metadata JSON records
// the original dimensions, the force mapping sidecar, codec parameters, and
// a payload CRC so corruption is detected before decoding.
inline constexpr uint8_t kContainerVersion = 1;
inline constexpr uint8_t kCodecIdLosslessLite = 0;
inline constexpr uint8_t kCodecIdLossyLite = 1;
inline constexpr uint8_t kCodecIdExternal = 2;
inline constexpr uint8_t kCodecIdStore = 3;
inline constexpr uint8_t kQualityLossless = 255;
inline constexpr uint8_t kFlagForceStacked = 0x01;

struct Container {
  uint8_t codec_id = 0;
  uint8_t flags = 0;
  uint16_t width = 0;    // coded dims
  uint16_t height = 0;
  uint8_t channels = 3;
  uint8_t quality = kQualityLossless;
  std::string metadata;  // JSON
  std::vector<uint8_t> payload;
};

std::vector<uint8_t> write_container(const Container& c);
Container read_container(const std::vector<uint8_t>& bytes);

}  // namespace taco
