#pragma once

#include <array>
#include <vector>

#include "taco/container.hpp"
#include "taco/frame.hpp"
#include "taco/metrics.hpp"

namespace taco {

// The four standard rate points. Larger lambda weights distortion more, so
// the quantizer step shrinks and the bitrate rises with the index.
inline constexpr std::array<double, 4> kLambdaSet = {0.0018, 0.0067, 0.025, 0.0483};

struct QualityPoint {
  uint8_t index;     // 0..3 for the standard set, 254 for custom points
  double lambda;
  uint32_t step;     // quantizer step, round(sqrt(12/lambda)) clamped to [1,256]

  static QualityPoint standard(uint8_t index);
  static QualityPoint from_lambda(double lambda);  // custom point
  static std::vector<QualityPoint> standard_sweep();
};

// Block-transform lossy codec: reversible YCoCg-R decorrelation, 8x8
// orthonormal DCT, uniform quantization (double-width dead zone on AC; DC is
// carried exactly), zigzag scan, adaptive range coding with per-band
// contexts. Frames are zero-padded to 8-multiples internally.
std::vector<uint8_t> encode_lossy(const TactileFrame& frame, const QualityPoint& q);

TactileFrame decode_lossy(const std::vector<uint8_t>& bytes);

// Dead-zone scalar quantizer for AC coefficients: zero bin (-step, step),
// outer bins of width step reconstructed at their centers. DC bypasses this
// and is carried exactly.
int quantize_ac_coefficient(double c, uint32_t step);
double dequantize_ac_coefficient(int level, uint32_t step);

// Rate-distortion objective: bits + lambda * MSE * sample_count.
double rd_cost(const TactileFrame& frame, const TactileFrame& recon, uint64_t bits,
               double lambda);

// One (mean bpp, PSNR, MS-SSIM) point per quality, sorted by bpp ascending.
// bpp aggregates over frames (sum bits / sum pixels); PSNR comes from the
// aggregate MSE; MS-SSIM is the plain frame average (absent for frames the
// metric cannot score).
RdCurve rd_sweep(const std::vector<TactileFrame>& frames,
                 const std::vector<QualityPoint>& qualities, const std::string& label = {});

}  // namespace taco
