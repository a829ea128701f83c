#include "taco/frame.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace taco {

uint8_t ForceImageMapping::quantize(double force, int axis) const {
  double level = std::round(force / scale[axis] + offset[axis]);
  return uint8_t(std::clamp(level, 0.0, 255.0));
}

double ForceImageMapping::dequantize(uint8_t level, int axis) const {
  return (double(level) - offset[axis]) * scale[axis];
}

void ForceImageMapping::validate() const {
  for (int a = 0; a < 3; ++a) {
    if (!(scale[a] > 0.0)) fail(Err::kNonPositiveInput, "mapping scale must be positive");
  }
}

void TactileFrame::validate() const {
  if (pixels.size() != size_t(width) * height * kChannels) {
    fail(Err::kDimensionMismatch, "pixel buffer does not match width*height*3");
  }
  if (orig_width > width || orig_height > height) {
    fail(Err::kDimensionMismatch, "recorded original dims exceed frame dims");
  }
}

namespace {

// PPM token scanner: skips whitespace and '#' comments between header fields.
int next_ppm_token(std::istream& in) {
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (!std::isspace(c)) {
      break;
    }
    c = in.get();
  }
  if (c == EOF) fail(Err::kUnsupportedFormat, "truncated PPM header");
  int value = 0;
  while (c != EOF && std::isdigit(c)) {
    value = value * 10 + (c - '0');
    c = in.get();
  }
  return value;
}

TactileFrame load_ppm(std::ifstream& in, const std::filesystem::path& path) {
  char magic[2];
  in.read(magic, 2);
  if (magic[0] != 'P') fail(Err::kUnsupportedFormat, path.string() + ": not a PNM file");
  if (magic[1] == '5') fail(Err::kNonThreeChannelImage, path.string() + ": grayscale PGM");
  if (magic[1] != '6') fail(Err::kUnsupportedFormat, path.string() + ": only binary PPM (P6) supported");

  uint32_t w = uint32_t(next_ppm_token(in));
  uint32_t h = uint32_t(next_ppm_token(in));
  int maxval = next_ppm_token(in);
  if (w == 0 || h == 0) fail(Err::kUnsupportedFormat, path.string() + ": zero dimension");
  if (maxval != 255) fail(Err::kUnsupportedFormat, path.string() + ": only maxval 255 supported");

  TactileFrame frame(w, h);
  in.read(reinterpret_cast<char*>(frame.pixels.data()), std::streamsize(frame.pixels.size()));
  if (size_t(in.gcount()) != frame.pixels.size()) {
    fail(Err::kUnreadableFile, path.string() + ": truncated pixel data");
  }
  return frame;
}

struct PngReadGuard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  FILE* file = nullptr;
  ~PngReadGuard() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    if (file) std::fclose(file);
  }
};

TactileFrame load_png(const std::filesystem::path& path) {
  PngReadGuard g;
  g.file = std::fopen(path.string().c_str(), "rb");
  if (!g.file) fail(Err::kUnreadableFile, path.string() + ": cannot open");
  g.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  g.info = png_create_info_struct(g.png);
  if (!g.png || !g.info) fail(Err::kUnreadableFile, "libpng init failed");
  if (setjmp(png_jmpbuf(g.png))) fail(Err::kUnreadableFile, path.string() + ": libpng error");

  png_init_io(g.png, g.file);
  png_read_info(g.png, g.info);

  png_uint_32 w = png_get_image_width(g.png, g.info);
  png_uint_32 h = png_get_image_height(g.png, g.info);
  int depth = png_get_bit_depth(g.png, g.info);
  int color = png_get_color_type(g.png, g.info);

  if (depth == 16) fail(Err::kUnsupportedFormat, path.string() + ": 16-bit PNG not supported");
  if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA ||
      color == PNG_COLOR_TYPE_RGB_ALPHA) {
    fail(Err::kNonThreeChannelImage, path.string() + ": expected 3-channel RGB");
  }
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(g.png);
  if (depth < 8) png_set_packing(g.png);
  png_read_update_info(g.png, g.info);
  if (png_get_channels(g.png, g.info) != 3) {
    fail(Err::kNonThreeChannelImage, path.string() + ": expected 3-channel RGB");
  }

  TactileFrame frame(w, h);
  std::vector<png_bytep> rows(h);
  for (png_uint_32 y = 0; y < h; ++y) rows[y] = frame.pixels.data() + size_t(y) * w * kChannels;
  png_read_image(g.png, rows.data());
  return frame;
}

}  // namespace

TactileFrame load_frame(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Err::kUnreadableFile, path.string() + ": cannot open");
  uint8_t sig[2] = {0, 0};
  in.read(reinterpret_cast<char*>(sig), 2);
  if (in.gcount() != 2) fail(Err::kUnreadableFile, path.string() + ": empty file");
  in.seekg(0);
  if (sig[0] == 'P') return load_ppm(in, path);
  if (sig[0] == 0x89 && sig[1] == 'P') {
    in.close();
    return load_png(path);
  }
  fail(Err::kUnsupportedFormat, path.string() + ": unrecognized raster format");
}

void save_ppm(const TactileFrame& frame, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Err::kUnwritableOutput, path.string() + ": cannot open for writing");
  out << "P6\n" << frame.width << " " << frame.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(frame.pixels.data()), std::streamsize(frame.pixels.size()));
  if (!out) fail(Err::kUnwritableOutput, path.string() + ": write failed");
}

void save_pgm(const std::vector<uint8_t>& gray, uint32_t width, uint32_t height,
              const std::filesystem::path& path, const std::string& comment) {
  if (gray.size() != size_t(width) * height) fail(Err::kDimensionMismatch, "PGM buffer size");
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Err::kUnwritableOutput, path.string() + ": cannot open for writing");
  out << "P5\n";
  if (!comment.empty()) out << "# " << comment << "\n";
  out << width << " " << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(gray.data()), std::streamsize(gray.size()));
  if (!out) fail(Err::kUnwritableOutput, path.string() + ": write failed");
}

TactileFrame pad_frame(const TactileFrame& frame, uint32_t target_w, uint32_t target_h) {
  if (target_w < frame.width || target_h < frame.height) {
    fail(Err::kTargetSmallerThanSource, "pad target smaller than source");
  }
  if (target_w == frame.width && target_h == frame.height) return frame;

  TactileFrame out(target_w, target_h, frame.sensor_kind);
  out.mapping = frame.mapping;
  out.orig_width = frame.orig_width;
  out.orig_height = frame.orig_height;
  const size_t row_bytes = size_t(frame.width) * kChannels;
  for (uint32_t y = 0; y < frame.height; ++y) {
    std::memcpy(out.pixels.data() + size_t(y) * target_w * kChannels,
                frame.pixels.data() + size_t(y) * frame.width * kChannels, row_bytes);
  }
  return out;
}

TactileFrame crop_to_recorded(const TactileFrame& frame) {
  if (frame.orig_width == frame.width && frame.orig_height == frame.height) return frame;
  TactileFrame out(frame.orig_width, frame.orig_height, frame.sensor_kind);
  out.mapping = frame.mapping;
  const size_t row_bytes = size_t(out.width) * kChannels;
  for (uint32_t y = 0; y < out.height; ++y) {
    std::memcpy(out.pixels.data() + size_t(y) * out.width * kChannels,
                frame.pixels.data() + size_t(y) * frame.width * kChannels, row_bytes);
  }
  return out;
}

}  // namespace taco
