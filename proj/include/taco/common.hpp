#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

namespace taco {

enum class Err {
  kUnreadableFile,
  kUnsupportedFormat,
  kNonThreeChannelImage,
  kInconsistentTaxelCount,
  kEmptySequence,
  kWrongSensorKind,
  kTooFewTrajectories,
  kTargetSmallerThanSource,
  kLengthGeometryMismatch,
  kTruncatedBitstream,
  kCountMismatch,
  kCorruptHeader,
  kCorruptPayload,
  kVersionMismatch,
  kDimensionMismatch,
  kTooSmallForAnyScale,
  kInsufficientPoints,
  kNoQualityOverlap,
  kNonMonotoneCurve,
  kNonPositiveInput,
  kZeroArea,
  kEmptyInput,
  kUnknownCodec,
  kMissingDataset,
  kExternalCommandFailure,
  kMalformedTemplate,
  kTooFewFrames,
  kEmptyTrainSet,
  kSingularSystem,
  kUnlabeledManifest,
  kUnsplitManifest,
  kConfigError,
  kUnwritableOutput,
};

// All recoverable failures are reported through this exception type so
// callers (and tests) can match on the code rather than message text.
class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) { throw Error(code, what); }

// CRC-32 (IEEE 802.3, reflected 0xEDB88320), used to guard entropy-coded
// payloads against silent corruption.
uint32_t crc32(std::span<const uint8_t> data);

// splitmix64: tiny deterministic PRNG. Seeded shuffles and synthetic data
// must not depend on the standard library's unspecified distributions.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound) without modulo bias (rejection sampling).
  uint64_t next_below(uint64_t bound) {
    uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  double next_unit() { return double(next() >> 11) * 0x1.0p-53; }

 private:
  uint64_t state_;
};

}  // namespace taco
