#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "taco/common.hpp"

namespace taco {

inline constexpr uint32_t kChannels = 3;

enum class SensorKind : uint8_t { kVisuoTactile, kForceStacked };

// Affine force->level mapping, per axis: level = clamp(round(f/scale + offset), 0, 255).
struct ForceImageMapping {
  std::array<double, 3> scale{1.0, 1.0, 1.0};    // Newtons per level, > 0
  std::array<double, 3> offset{128.0, 128.0, 128.0};

  uint8_t quantize(double force, int axis) const;
  double dequantize(uint8_t level, int axis) const;
  void validate() const;
};

// A W x H x 3 8-bit tactile image, channel-interleaved row-major.
// orig_width/orig_height track the pre-padding dimensions so padding can be
// undone exactly; they equal width/height for unpadded frames.
struct TactileFrame {
  uint32_t width = 0;
  uint32_t height = 0;
  SensorKind sensor_kind = SensorKind::kVisuoTactile;
  std::vector<uint8_t> pixels;  // width * height * kChannels
  uint32_t orig_width = 0;
  uint32_t orig_height = 0;
  std::optional<ForceImageMapping> mapping;  // present for force-stacked frames

  TactileFrame() = default;
  TactileFrame(uint32_t w, uint32_t h, SensorKind kind = SensorKind::kVisuoTactile)
      : width(w), height(h), sensor_kind(kind), pixels(size_t(w) * h * kChannels, 0),
        orig_width(w), orig_height(h) {}

  uint8_t& at(uint32_t x, uint32_t y, uint32_t c) {
    return pixels[(size_t(y) * width + x) * kChannels + c];
  }
  uint8_t at(uint32_t x, uint32_t y, uint32_t c) const {
    return pixels[(size_t(y) * width + x) * kChannels + c];
  }
  size_t sample_count() const { return pixels.size(); }
  size_t raw_bytes() const { return pixels.size(); }
  bool same_dims(const TactileFrame& other) const {
    return width == other.width && height == other.height;
  }
  void validate() const;
};

// Reads an 8-bit RGB raster file (binary PPM or PNG, sniffed by magic).
TactileFrame load_frame(const std::filesystem::path& path);

// Binary PPM (P6, maxval 255) writer; the canonical fixture format.
void save_ppm(const TactileFrame& frame, const std::filesystem::path& path);

// 8-bit grayscale PGM writer (used for RMSE map visualization).
void save_pgm(const std::vector<uint8_t>& gray, uint32_t width, uint32_t height,
              const std::filesystem::path& path, const std::string& comment = {});

// Zero-pads to target_w x target_h with the original content at the top-left.
// orig_width/orig_height keep the source dimensions for exact un-padding.
TactileFrame pad_frame(const TactileFrame& frame, uint32_t target_w, uint32_t target_h);

// Inverse of pad_frame: crops back to the recorded original dimensions.
TactileFrame crop_to_recorded(const TactileFrame& frame);

inline uint32_t round_up(uint32_t v, uint32_t multiple) {
  return (v + multiple - 1) / multiple * multiple;
}

}  // namespace taco
