#include <fstream>

#include "doctest.h"
#include "taco/frame.hpp"
#include "test_util.hpp"

using namespace taco;

namespace {

// 3x2 RGB PNG, pixels (10,20,30), (40,50,60), ... row-major.
const unsigned char kRgbPng[76] = {
    0x89, 0x50, 0x4E, 0x47, 0x0D, 0x0A, 0x1A, 0x0A, 0x00, 0x00, 0x00, 0x0D, 0x49, 0x48, 0x44,
    0x52, 0x00, 0x00, 0x00, 0x03, 0x00, 0x00, 0x00, 0x02, 0x08, 0x02, 0x00, 0x00, 0x00, 0x12,
    0x16, 0xF1, 0x4D, 0x00, 0x00, 0x00, 0x13, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9C, 0x63, 0xE4,
    0x12, 0x91, 0x83, 0x00, 0x96, 0xA8, 0xA8, 0x28, 0x08, 0x0B, 0x00, 0x18, 0xD8, 0x02, 0xB8,
    0x39, 0xD0, 0xD4, 0xA0, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4E, 0x44, 0xAE, 0x42, 0x60,
    0x82,
};

// 2x2 grayscale PNG. Not three channels, so loading must be rejected.
const unsigned char kGrayPng[71] = {
    0x89, 0x50, 0x4E, 0x47, 0x0D, 0x0A, 0x1A, 0x0A, 0x00, 0x00, 0x00, 0x0D, 0x49, 0x48, 0x44,
    0x52, 0x00, 0x00, 0x00, 0x02, 0x00, 0x00, 0x00, 0x02, 0x08, 0x00, 0x00, 0x00, 0x00, 0x57,
    0xDD, 0x52, 0xF8, 0x00, 0x00, 0x00, 0x0E, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9C, 0x63, 0x60,
    0x08, 0x65, 0x58, 0xF5, 0x1F, 0x00, 0x03, 0xAD, 0x01, 0xFF, 0x67, 0xFB, 0xCA, 0x09, 0x00,
    0x00, 0x00, 0x00, 0x49, 0x45, 0x4E, 0x44, 0xAE, 0x42, 0x60, 0x82,
};

void write_bytes(const std::filesystem::path& p, const unsigned char* data, size_t n) {
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(data), std::streamsize(n));
}

}  // namespace

TEST_CASE("ppm round trip preserves pixels and dims") {
  tt::TempDir dir;
  const TactileFrame frame = tt::smooth_frame(37, 23, 5);
  save_ppm(frame, dir.path / "f.ppm");
  const TactileFrame back = load_frame(dir.path / "f.ppm");
  CHECK(back.width == 37);
  CHECK(back.height == 23);
  CHECK(back.pixels == frame.pixels);
}

TEST_CASE("load_frame handles dataset-sized ppm files") {
  tt::TempDir dir;
  // 640x480 and 120x160 cover the largest and smallest visuo resolutions
  for (auto [w, h] : {std::pair<uint32_t, uint32_t>{640, 480}, {120, 160}}) {
    const TactileFrame frame = tt::noise_frame(w, h, w * 1000 + h);
    save_ppm(frame, dir.path / "t.ppm");
    const TactileFrame back = load_frame(dir.path / "t.ppm");
    CHECK(back.width == w);
    CHECK(back.height == h);
    CHECK(back.pixels.size() == size_t(w) * h * 3);
    CHECK(back.pixels == frame.pixels);
  }
}

TEST_CASE("ppm parser accepts comments and rejects bad headers") {
  tt::TempDir dir;
  {
    std::ofstream out(dir.path / "c.ppm", std::ios::binary);
    out << "P6\n# a comment\n2 1\n255\n";
    const unsigned char px[6] = {1, 2, 3, 4, 5, 6};
    out.write(reinterpret_cast<const char*>(px), 6);
  }
  const TactileFrame f = load_frame(dir.path / "c.ppm");
  CHECK(f.width == 2);
  CHECK(f.at(1, 0, 2) == 6);

  {
    std::ofstream out(dir.path / "bad.ppm", std::ios::binary);
    out << "P6\n2 1\n65535\n";
  }
  CHECK_THROWS_AS(load_frame(dir.path / "bad.ppm"), Error);

  {
    std::ofstream out(dir.path / "trunc.ppm", std::ios::binary);
    out << "P6\n4 4\n255\nxx";
  }
  CHECK_THROWS_WITH_AS(load_frame(dir.path / "trunc.ppm"), doctest::Contains("truncated"), Error);
}

TEST_CASE("grayscale rasters are rejected as non-three-channel") {
  tt::TempDir dir;
  {
    std::ofstream out(dir.path / "g.pgm", std::ios::binary);
    out << "P5\n2 2\n255\nabcd";
  }
  try {
    load_frame(dir.path / "g.pgm");
    FAIL("expected NonThreeChannelImage");
  } catch (const Error& e) {
    CHECK(e.code() == Err::kNonThreeChannelImage);
  }

  write_bytes(dir.path / "g.png", kGrayPng, sizeof(kGrayPng));
  try {
    load_frame(dir.path / "g.png");
    FAIL("expected NonThreeChannelImage");
  } catch (const Error& e) {
    CHECK(e.code() == Err::kNonThreeChannelImage);
  }
}

TEST_CASE("png loading yields the exact pixel data") {
  tt::TempDir dir;
  write_bytes(dir.path / "f.png", kRgbPng, sizeof(kRgbPng));
  const TactileFrame f = load_frame(dir.path / "f.png");
  CHECK(f.width == 3);
  CHECK(f.height == 2);
  for (size_t i = 0; i < f.pixels.size(); ++i) CHECK(f.pixels[i] == 10 * (i + 1));
}

TEST_CASE("unknown formats and missing files error out") {
  tt::TempDir dir;
  {
    std::ofstream out(dir.path / "x.bin", std::ios::binary);
    out << "not a raster";
  }
  try {
    load_frame(dir.path / "x.bin");
    FAIL("expected UnsupportedFormat");
  } catch (const Error& e) {
    CHECK(e.code() == Err::kUnsupportedFormat);
  }
  try {
    load_frame(dir.path / "missing.ppm");
    FAIL("expected UnreadableFile");
  } catch (const Error& e) {
    CHECK(e.code() == Err::kUnreadableFile);
  }
}

TEST_CASE("pad_frame zero-pads at bottom/right and records original dims") {
  const TactileFrame frame = tt::smooth_frame(240, 320, 7);
  const TactileFrame padded = pad_frame(frame, 256, 320);
  CHECK(padded.width == 256);
  CHECK(padded.height == 320);
  CHECK(padded.orig_width == 240);
  CHECK(padded.orig_height == 320);
  for (uint32_t y = 0; y < 320; ++y) {
    for (uint32_t x = 240; x < 256; ++x) {
      for (uint32_t c = 0; c < 3; ++c) CHECK(padded.at(x, y, c) == 0);
    }
  }
  CHECK(padded.at(100, 100, 1) == frame.at(100, 100, 1));
}

TEST_CASE("pad_frame at target dims is the identity") {
  const TactileFrame frame = tt::smooth_frame(64, 48, 3);
  const TactileFrame same = pad_frame(frame, 64, 48);
  CHECK(same.pixels == frame.pixels);
}

TEST_CASE("5x12 tile padded to one 16x16 patch") {
  const TactileFrame tile = tt::noise_frame(5, 12, 99);
  const TactileFrame padded = pad_frame(tile, 16, 16);
  CHECK(padded.width == 16);
  CHECK(padded.height == 16);
  size_t zeros = 0;
  for (uint32_t y = 0; y < 16; ++y) {
    for (uint32_t x = 0; x < 16; ++x) {
      if (x >= 5 || y >= 12) {
        for (uint32_t c = 0; c < 3; ++c) CHECK(padded.at(x, y, c) == 0);
        ++zeros;
      }
    }
  }
  CHECK(zeros == 16 * 16 - 5 * 12);
}

TEST_CASE("pad then crop-to-recorded-dims is the identity on pixels") {
  SplitMix64 rng(42);
  for (int i = 0; i < 50; ++i) {
    const uint32_t w = 1 + uint32_t(rng.next_below(80));
    const uint32_t h = 1 + uint32_t(rng.next_below(80));
    const TactileFrame frame = tt::noise_frame(w, h, rng.next());
    const uint32_t tw = w + uint32_t(rng.next_below(40));
    const uint32_t th = h + uint32_t(rng.next_below(40));
    const TactileFrame back = crop_to_recorded(pad_frame(frame, tw, th));
    REQUIRE(back.width == w);
    REQUIRE(back.height == h);
    REQUIRE(back.pixels == frame.pixels);
  }
}

TEST_CASE("pad_frame rejects shrinking targets") {
  const TactileFrame frame = tt::constant_frame(20, 20, 1, 2, 3);
  try {
    pad_frame(frame, 16, 24);
    FAIL("expected TargetSmallerThanSource");
  } catch (const Error& e) {
    CHECK(e.code() == Err::kTargetSmallerThanSource);
  }
}
