#include <zlib.h>

#include <vector>

#include "doctest.h"
#include "taco/codec.hpp"
#include "taco/lossless.hpp"
#include "test_util.hpp"

using namespace taco;

namespace {

size_t deflate_size(const std::vector<uint8_t>& data) {
  uLongf bound = compressBound(uLong(data.size()));
  std::vector<uint8_t> out(bound);
  REQUIRE(compress2(out.data(), &bound, data.data(), uLong(data.size()), 9) == Z_OK);
  return bound;
}

}  // namespace

TEST_CASE("constant frame payload is under 0.1 bits/Byte (ratio > 80x)") {
  const TactileFrame frame = tt::constant_frame(256, 256, 200, 60, 120);
  const LosslessSize size = encode_lossless_size(frame);
  const double payload_bpb = double(size.payload_bytes) * 8.0 / double(frame.raw_bytes());
  CHECK(payload_bpb < 0.1);
  const double total_bpb = double(size.container_bytes) * 8.0 / double(frame.raw_bytes());
  CHECK(compression_ratio(total_bpb) > 80.0);
}

TEST_CASE("uniform-random frame lands in [8.0, 8.2] bits/Byte with header") {
  const TactileFrame frame = tt::noise_frame(256, 256, 21);
  const double bpb = bits_per_byte_of({frame});
  CHECK(bpb >= 8.0);
  CHECK(bpb <= 8.2);
}

TEST_CASE("smooth gradient frame beats a general-purpose byte compressor") {
  // low noise breaks deflate's row-repeat matching but not the predictor
  const TactileFrame frame = tt::smooth_frame(256, 256, 22, 2);
  const double ours = double(encode_lossless(frame).size());
  const double deflate = double(deflate_size(frame.pixels));
  CHECK(ours < deflate);
}

TEST_CASE("round trip is bit-exact across fixtures") {
  for (const auto& [name, frame] : tt::all_fixtures()) {
    INFO(name);
    const std::vector<uint8_t> bytes = encode_lossless(frame);
    const TactileFrame back = decode_lossless(bytes);
    REQUIRE(back.width == frame.width);
    REQUIRE(back.height == frame.height);
    REQUIRE(back.pixels == frame.pixels);
    REQUIRE(back.sensor_kind == frame.sensor_kind);
  }
}

TEST_CASE("round trip on random frames at every dataset resolution") {
  SplitMix64 rng(23);
  const std::vector<std::pair<uint32_t, uint32_t>> dims = {
      {640, 480}, {120, 160}, {240, 320}, {5, 12}, {16, 16}};
  for (auto [w, h] : dims) {
    for (int i = 0; i < 3; ++i) {
      const TactileFrame frame = tt::noise_frame(w, h, rng.next());
      REQUIRE(decode_lossless(encode_lossless(frame)).pixels == frame.pixels);
    }
  }
}

TEST_CASE("all predictors and context widths round trip") {
  const TactileFrame frame = tt::smooth_frame(48, 48, 24, 30);
  for (Predictor p : {Predictor::kZero, Predictor::kLeft, Predictor::kMedianEdge}) {
    for (uint32_t buckets : {1u, 2u, 8u, 16u}) {
      LosslessConfig cfg;
      cfg.predictor = p;
      cfg.context_buckets = buckets;
      INFO(int(p) << " buckets=" << buckets);
      REQUIRE(decode_lossless(encode_lossless(frame, cfg)).pixels == frame.pixels);
    }
  }
}

TEST_CASE("median-edge with contexts beats the zero predictor on gradients") {
  std::vector<TactileFrame> corpus;
  for (int i = 0; i < 10; ++i) corpus.push_back(tt::smooth_frame(128, 128, 100 + i, 2));

  LosslessConfig strong;  // defaults: MedianEdge, 8 contexts
  LosslessConfig weak;
  weak.predictor = Predictor::kZero;
  weak.context_buckets = 1;
  CHECK(bits_per_byte_of(corpus, strong) <= bits_per_byte_of(corpus, weak));
}

TEST_CASE("identical frame and config produce identical bytes") {
  const TactileFrame frame = tt::smooth_frame(100, 80, 25);
  CHECK(encode_lossless(frame) == encode_lossless(frame));
}

TEST_CASE("force-stacked round trip preserves kind and mapping") {
  const TactileFrame frame = tt::force_fixture(12, 40);
  REQUIRE(frame.mapping.has_value());
  const TactileFrame back = decode_lossless(encode_lossless(frame));
  CHECK(back.sensor_kind == SensorKind::kForceStacked);
  REQUIRE(back.mapping.has_value());
  CHECK(back.mapping->scale == frame.mapping->scale);
  CHECK(back.mapping->offset == frame.mapping->offset);
  CHECK(back.pixels == frame.pixels);
}

TEST_CASE("header corruption is detected") {
  std::vector<uint8_t> bytes = encode_lossless(tt::smooth_frame(32, 32, 26));
  SUBCASE("flipped magic byte") {
    bytes[1] ^= 0xFF;
    try {
      decode_lossless(bytes);
      FAIL("expected CorruptHeader");
    } catch (const Error& e) {
      CHECK(e.code() == Err::kCorruptHeader);
    }
  }
  SUBCASE("version bump") {
    bytes[4] = 9;
    try {
      decode_lossless(bytes);
      FAIL("expected VersionMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == Err::kVersionMismatch);
    }
  }
  SUBCASE("truncated payload") {
    bytes.resize(bytes.size() - 10);
    try {
      decode_lossless(bytes);
      FAIL("expected TruncatedBitstream");
    } catch (const Error& e) {
      CHECK(e.code() == Err::kTruncatedBitstream);
    }
  }
  SUBCASE("flipped payload byte") {
    bytes[bytes.size() - 3] ^= 0x10;
    try {
      decode_lossless(bytes);
      FAIL("expected CorruptPayload");
    } catch (const Error& e) {
      CHECK(e.code() == Err::kCorruptPayload);
    }
  }
}

TEST_CASE("bits/Byte definition arithmetic") {
  // 1000 raw bytes at 250 compressed bytes is 2 bits/Byte, ratio 4x
  CHECK(double(250 * 8) / 1000.0 == 2.0);
  CHECK(compression_ratio(2.0) == 4.0);
  // the convention from the headline tables: 0.447 bits/Byte is about 18x
  CHECK(compression_ratio(0.447) == doctest::Approx(17.897).epsilon(1e-3));
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.0fx", compression_ratio(0.447));
  CHECK(std::string(buf) == "18x");
}

TEST_CASE("store codec reports 8 bits/Byte plus visible header overhead") {
  const TactileFrame frame = tt::smooth_frame(64, 64, 27);
  const std::vector<uint8_t> bytes = encode_store(frame);
  const double bpb = double(bytes.size()) * 8.0 / double(frame.raw_bytes());
  CHECK(bpb > 8.0);
  CHECK(bpb < 8.2);
  CHECK(decode_store(bytes).pixels == frame.pixels);
}

TEST_CASE("empty frame list is rejected") {
  try {
    bits_per_byte_of({});
    FAIL("expected EmptyInput");
  } catch (const Error& e) {
    CHECK(e.code() == Err::kEmptyInput);
  }
}
