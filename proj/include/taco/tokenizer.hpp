#pragma once

#include <cstdint>
#include <vector>

#include "taco/frame.hpp"

namespace taco {

inline constexpr uint32_t kPatchSize = 16;
inline constexpr uint32_t kPatchSymbols = kPatchSize * kPatchSize * kChannels;  // 768

enum class ChannelOrder : uint8_t { kRGB, kXYZ };

struct PatchGeometry {
  uint32_t grid_cols = 0;
  uint32_t grid_rows = 0;
  uint32_t orig_w = 0;
  uint32_t orig_h = 0;

  uint32_t padded_w() const { return grid_cols * kPatchSize; }
  uint32_t padded_h() const { return grid_rows * kPatchSize; }
  size_t symbol_count() const { return size_t(grid_rows) * grid_cols * kPatchSymbols; }

  static PatchGeometry for_dims(uint32_t w, uint32_t h) {
    return {(w + kPatchSize - 1) / kPatchSize, (h + kPatchSize - 1) / kPatchSize, w, h};
  }
};

// Flattened symbol sequence: patches in row-major grid order; raster scan
// within a patch; channels expanded per pixel as (R,G,B) / (x,y,z).
struct TokenStream {
  std::vector<uint8_t> symbols;
  PatchGeometry geometry;
  ChannelOrder channel_order = ChannelOrder::kRGB;
};

// Zero-pads to 16-multiples internally; never fails on odd dimensions.
TokenStream tokenize(const TactileFrame& frame);

// Exact inverse: reconstructs the frame and strips the padding.
TactileFrame detokenize(const TokenStream& tokens);

}  // namespace taco
