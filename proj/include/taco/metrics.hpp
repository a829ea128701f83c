#pragma once

#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "taco/frame.hpp"

namespace taco {

// PSNR sentinel for zero MSE; serialized as "inf" in reports.
inline constexpr double kPsnrInf = std::numeric_limits<double>::infinity();

struct RdPoint {
  double bpp = 0.0;
  double psnr = 0.0;                 // dB, kPsnrInf when lossless
  std::optional<double> ms_ssim{};   // absent when frames are too small
};

struct RdCurve {
  std::vector<RdPoint> points;  // sorted by bpp ascending
  std::string label;
};

// Mean squared error over all W*H*3 samples, RGB domain.
double mse(const TactileFrame& a, const TactileFrame& b);

// 10*log10(255^2 / MSE); kPsnrInf when MSE == 0.
double psnr(const TactileFrame& a, const TactileFrame& b);
double psnr_from_mse(double mse_value);

// Multi-scale SSIM: up to 5 dyadic scales, 11x11 Gaussian window sigma 1.5,
// weights (0.0448, 0.2856, 0.3001, 0.2363, 0.1333), channels averaged.
// Frames smaller than 11 pixels in either dimension cannot be scored; when
// fewer than 5 scales fit, the leading weights are renormalized and
// scales_used reports how many were evaluated.
struct MsSsimResult {
  double value;
  int scales_used;
};
MsSsimResult ms_ssim_ex(const TactileFrame& a, const TactileFrame& b);
double ms_ssim(const TactileFrame& a, const TactileFrame& b);

// Per-pixel sqrt(mean over channels of squared error), row-major W*H.
std::vector<double> rmse_map(const TactileFrame& a, const TactileFrame& b);

// Writes map.pgm (grayscale, scaled by the recorded factor) and map.csv.
void save_rmse_map(const std::vector<double>& map, uint32_t width, uint32_t height,
                   const std::filesystem::path& pgm_path, const std::filesystem::path& csv_path);

// Bjontegaard delta rate between two RD curves, in percent; negative means
// the test curve needs less rate at equal quality. log10(bpp) is
// interpolated against quality with a monotone piecewise-cubic Hermite fit
// and integrated in closed form over the overlapping quality interval.
enum class BdQuality { kPsnr, kMsSsim };
double bd_rate(const RdCurve& anchor, const RdCurve& test, BdQuality quality = BdQuality::kPsnr);

// Evaluates the same fitted curve bd_rate integrates: log10(bpp) at the
// given quality. Interpolating, not regressing: knots reproduce exactly.
double interpolate_log_rate(const RdCurve& curve, double quality,
                            BdQuality mode = BdQuality::kPsnr);

// bpp * w * h * fps * 1e-6.
double bandwidth_mbps(double bpp, uint32_t width, uint32_t height, double fps);

// bits / (w * h); raw 8-bit RGB yields exactly 24.
double bpp_of(uint64_t bits, uint32_t width, uint32_t height);

}  // namespace taco
