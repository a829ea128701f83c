#pragma once

#include <vector>

#include "taco/container.hpp"
#include "taco/frame.hpp"
#include "taco/prob_model.hpp"

namespace taco {

enum class Predictor : uint8_t { kZero, kLeft, kMedianEdge };

struct LosslessConfig {
  Predictor predictor = Predictor::kMedianEdge;
  uint32_t context_buckets = 8;  // geometric |left - above| bins, >= 1
  ModelParams adaptation;
};

// Predictive lossless codec over the tokenized stream: per-symbol prediction
// inside each 16x16 patch (out-of-patch neighbors read as zero), modulo-256
// residuals, gradient-bucket contexts, one adaptive range coder per frame.
std::vector<uint8_t> encode_lossless(const TactileFrame& frame, const LosslessConfig& cfg = {});

TactileFrame decode_lossless(const std::vector<uint8_t>& bytes);

// Payload-only size of the last stage, exposed for rate accounting tests.
struct LosslessSize {
  size_t container_bytes;
  size_t payload_bytes;
};
LosslessSize encode_lossless_size(const TactileFrame& frame, const LosslessConfig& cfg = {});

// Aggregate (sum of compressed bits, containers included) / (sum of raw
// bytes). The uncompressed baseline is exactly 8; ratio = 8 / bitsPerByte.
double bits_per_byte_of(const std::vector<TactileFrame>& frames, const LosslessConfig& cfg = {});

inline double compression_ratio(double bits_per_byte) { return 8.0 / bits_per_byte; }

}  // namespace taco
