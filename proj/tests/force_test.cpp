#include <cmath>
#include <fstream>

#include "doctest.h"
#include "taco/force.hpp"
#include "test_util.hpp"

using namespace taco;

namespace {

ForceSequence make_sequence(uint32_t steps, uint32_t taxels, uint64_t seed, double amp) {
  SplitMix64 rng(seed);
  ForceSequence seq(steps);
  for (uint32_t t = 0; t < steps; ++t) {
    seq[t].timestamp = double(t) * 0.01;
    seq[t].forces.resize(taxels);
    for (uint32_t n = 0; n < taxels; ++n) {
      for (int a = 0; a < 3; ++a) seq[t].forces[n][a] = (rng.next_unit() * 2.0 - 1.0) * amp;
    }
  }
  return seq;
}

}  // namespace

TEST_CASE("force stacking produces a T x N x 3 frame") {
  const ForceSequence seq = make_sequence(200, 60, 1, 3.0);
  ForceImageMapping mapping;
  mapping.scale = {0.05, 0.05, 0.05};
  const TactileFrame frame = force_to_frame(seq, mapping);
  CHECK(frame.width == 60);    // one column per taxel
  CHECK(frame.height == 200);  // one row per timestamp
  CHECK(frame.sensor_kind == SensorKind::kForceStacked);
  CHECK(frame.pixels.size() == 200 * 60 * 3);
  REQUIRE(frame.mapping.has_value());
}

TEST_CASE("zero force maps to the offset level") {
  ForceSequence seq(1);
  seq[0].forces.assign(4, {0.0, 0.0, 0.0});
  ForceImageMapping mapping;  // scale 1, offset 128
  const TactileFrame frame = force_to_frame(seq, mapping);
  for (uint8_t p : frame.pixels) CHECK(p == 128);
}

TEST_CASE("quantizer worked example") {
  ForceSequence seq(2);
  seq[0].timestamp = 0.0;
  seq[0].forces = {{1.0, -1.0, 0.5}};
  seq[1].timestamp = 1.0;
  seq[1].forces = {{1.0, -1.0, 0.5}};
  ForceImageMapping mapping;
  mapping.scale = {0.1, 0.1, 0.1};
  const TactileFrame frame = force_to_frame(seq, mapping);
  CHECK(frame.width == 1);
  CHECK(frame.height == 2);
  CHECK(frame.at(0, 0, 0) == 138);  // 1.0/0.1 + 128
  CHECK(frame.at(0, 0, 1) == 118);  // -1.0/0.1 + 128
  CHECK(frame.at(0, 0, 2) == 133);  // 0.5/0.1 + 128
}

TEST_CASE("out-of-range forces clamp to [0,255]") {
  ForceSequence seq(1);
  seq[0].forces = {{1e6, -1e6, 0.0}};
  ForceImageMapping mapping;
  const TactileFrame frame = force_to_frame(seq, mapping);
  CHECK(frame.at(0, 0, 0) == 255);
  CHECK(frame.at(0, 0, 1) == 0);
}

TEST_CASE("force_to_frame error paths") {
  ForceImageMapping mapping;
  try {
    force_to_frame({}, mapping);
    FAIL("expected EmptySequence");
  } catch (const Error& e) {
    CHECK(e.code() == Err::kEmptySequence);
  }

  ForceSequence bad(2);
  bad[0].forces.assign(3, {0, 0, 0});
  bad[1].forces.assign(4, {0, 0, 0});
  try {
    force_to_frame(bad, mapping);
    FAIL("expected InconsistentTaxelCount");
  } catch (const Error& e) {
    CHECK(e.code() == Err::kInconsistentTaxelCount);
  }

  try {
    frame_to_force(tt::smooth_frame(8, 8, 1), mapping);
    FAIL("expected WrongSensorKind");
  } catch (const Error& e) {
    CHECK(e.code() == Err::kWrongSensorKind);
  }
}

TEST_CASE("all-128 frame with identity mapping dequantizes to zero forces") {
  TactileFrame frame(3, 2, SensorKind::kForceStacked);
  for (uint8_t& p : frame.pixels) p = 128;
  const ForceSequence seq = frame_to_force(frame, ForceImageMapping{});
  for (const ForceRecord& rec : seq) {
    for (const auto& f : rec.forces) {
      CHECK(f[0] == 0.0);
      CHECK(f[1] == 0.0);
      CHECK(f[2] == 0.0);
    }
  }
}

TEST_CASE("quantize/dequantize round trip is exact on the full level grid") {
  // Awkward scale/offset values on purpose; exactness must not depend on
  // them being nice.
  ForceImageMapping mapping;
  mapping.scale = {0.013, 2.75, 1.0 / 3.0};
  mapping.offset = {128.0, 17.5, 200.25};
  for (int axis = 0; axis < 3; ++axis) {
    for (int level = 0; level < 256; ++level) {
      const double force = mapping.dequantize(uint8_t(level), axis);
      CHECK(mapping.quantize(force, axis) == level);
    }
  }
}

TEST_CASE("frame -> force -> frame is bit-exact; forces land within scale/2") {
  SplitMix64 rng(77);
  for (int trial = 0; trial < 1000; ++trial) {
    const uint32_t taxels = 1 + uint32_t(rng.next_below(8));
    const uint32_t steps = 1 + uint32_t(rng.next_below(6));
    ForceImageMapping mapping;
    mapping.scale = {0.01 + rng.next_unit(), 0.01 + rng.next_unit(), 0.01 + rng.next_unit()};
    mapping.offset = {rng.next_unit() * 255.0, rng.next_unit() * 255.0, rng.next_unit() * 255.0};

    // forces drawn inside the representable range of each axis
    ForceSequence seq(steps);
    for (uint32_t t = 0; t < steps; ++t) {
      seq[t].timestamp = double(t);
      seq[t].forces.resize(taxels);
      for (uint32_t n = 0; n < taxels; ++n) {
        for (int a = 0; a < 3; ++a) {
          const double lo = mapping.dequantize(0, a);
          const double hi = mapping.dequantize(255, a);
          seq[t].forces[n][a] = lo + rng.next_unit() * (hi - lo);
        }
      }
    }

    const TactileFrame frame = force_to_frame(seq, mapping);
    const ForceSequence back = frame_to_force(frame, mapping);
    for (uint32_t t = 0; t < steps; ++t) {
      for (uint32_t n = 0; n < taxels; ++n) {
        for (int a = 0; a < 3; ++a) {
          REQUIRE(std::abs(back[t].forces[n][a] - seq[t].forces[n][a]) <=
                  mapping.scale[a] / 2.0 + 1e-12);
        }
      }
    }
    const TactileFrame again = force_to_frame(back, mapping);
    REQUIRE(again.pixels == frame.pixels);
  }
}

TEST_CASE("force csv round trip") {
  tt::TempDir dir;
  const ForceSequence seq = make_sequence(20, 5, 3, 4.0);
  save_force_csv(seq, dir.path / "f.csv");
  const ForceSequence back = load_force_csv(dir.path / "f.csv");
  REQUIRE(back.size() == seq.size());
  for (size_t t = 0; t < seq.size(); ++t) {
    CHECK(back[t].timestamp == doctest::Approx(seq[t].timestamp).epsilon(1e-15));
    REQUIRE(back[t].forces.size() == seq[t].forces.size());
    for (size_t n = 0; n < seq[t].forces.size(); ++n) {
      for (int a = 0; a < 3; ++a) {
        CHECK(back[t].forces[n][a] == seq[t].forces[n][a]);  // %.17g is exact
      }
    }
  }
}

TEST_CASE("force csv rejects non-increasing timestamps and ragged rows") {
  tt::TempDir dir;
  {
    std::ofstream out(dir.path / "bad.csv", std::ios::binary);
    out << "t,fx_0,fy_0,fz_0\n1.0,0,0,0\n0.5,0,0,0\n";
  }
  CHECK_THROWS_AS(load_force_csv(dir.path / "bad.csv"), Error);
  {
    std::ofstream out(dir.path / "ragged.csv", std::ios::binary);
    out << "t,fx_0,fy_0,fz_0\n0.0,0,0\n";
  }
  CHECK_THROWS_AS(load_force_csv(dir.path / "ragged.csv"), Error);
}

TEST_CASE("mapping sidecar json round trip") {
  tt::TempDir dir;
  ForceImageMapping mapping;
  mapping.scale = {0.5, 0.25, 0.125};
  mapping.offset = {10.0, 20.0, 30.0};
  save_mapping(mapping, dir.path / "m.json");
  const ForceImageMapping back = load_mapping(dir.path / "m.json");
  CHECK(back.scale == mapping.scale);
  CHECK(back.offset == mapping.offset);

  ForceImageMapping bad;
  bad.scale = {0.0, 1.0, 1.0};
  CHECK_THROWS_AS(bad.validate(), Error);
}
