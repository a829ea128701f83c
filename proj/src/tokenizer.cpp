#include "taco/tokenizer.hpp"

#include <cstring>

namespace taco {

TokenStream tokenize(const TactileFrame& frame) {
  const PatchGeometry geom = PatchGeometry::for_dims(frame.width, frame.height);
  const TactileFrame padded = pad_frame(frame, geom.padded_w(), geom.padded_h());

  TokenStream out;
  out.geometry = geom;
  out.channel_order =
      frame.sensor_kind == SensorKind::kForceStacked ? ChannelOrder::kXYZ : ChannelOrder::kRGB;
  out.symbols.resize(geom.symbol_count());

  // One patch is a contiguous run of 768 symbols; rows inside a patch are
  // contiguous 48-byte slices of the padded frame.
  uint8_t* dst = out.symbols.data();
  const size_t row_bytes = size_t(kPatchSize) * kChannels;
  for (uint32_t pr = 0; pr < geom.grid_rows; ++pr) {
    for (uint32_t pc = 0; pc < geom.grid_cols; ++pc) {
      for (uint32_t y = 0; y < kPatchSize; ++y) {
        const uint8_t* src = padded.pixels.data() +
                             ((size_t(pr) * kPatchSize + y) * padded.width + size_t(pc) * kPatchSize) *
                                 kChannels;
        std::memcpy(dst, src, row_bytes);
        dst += row_bytes;
      }
    }
  }
  return out;
}

TactileFrame detokenize(const TokenStream& tokens) {
  const PatchGeometry& geom = tokens.geometry;
  if (tokens.symbols.size() != geom.symbol_count()) {
    fail(Err::kLengthGeometryMismatch, "token count does not match patch geometry");
  }

  TactileFrame padded(geom.padded_w(), geom.padded_h());
  padded.orig_width = geom.orig_w;
  padded.orig_height = geom.orig_h;
  padded.sensor_kind =
      tokens.channel_order == ChannelOrder::kXYZ ? SensorKind::kForceStacked : SensorKind::kVisuoTactile;

  const uint8_t* src = tokens.symbols.data();
  const size_t row_bytes = size_t(kPatchSize) * kChannels;
  for (uint32_t pr = 0; pr < geom.grid_rows; ++pr) {
    for (uint32_t pc = 0; pc < geom.grid_cols; ++pc) {
      for (uint32_t y = 0; y < kPatchSize; ++y) {
        uint8_t* dst = padded.pixels.data() +
                       ((size_t(pr) * kPatchSize + y) * padded.width + size_t(pc) * kPatchSize) *
                           kChannels;
        std::memcpy(dst, src, row_bytes);
        src += row_bytes;
      }
    }
  }
  return crop_to_recorded(padded);
}

}  // namespace taco
