#include "taco/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>

#include "taco/kernels.hpp"

namespace taco {

double mse(const TactileFrame& a, const TactileFrame& b) {
  if (!a.same_dims(b)) fail(Err::kDimensionMismatch, "mse: frame dims differ");
  const uint64_t sse =
      kernels::active_kernels().sse_u8(a.pixels.data(), b.pixels.data(), a.pixels.size());
  return double(sse) / double(a.pixels.size());
}

double psnr_from_mse(double mse_value) {
  if (mse_value <= 0.0) return kPsnrInf;
  return 10.0 * std::log10(255.0 * 255.0 / mse_value);
}

double psnr(const TactileFrame& a, const TactileFrame& b) { return psnr_from_mse(mse(a, b)); }

namespace {

constexpr int kWindow = 11;
constexpr double kMsSsimWeights[5] = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};

std::array<double, kWindow> gaussian_window() {
  std::array<double, kWindow> w{};
  const double sigma = 1.5;
  double sum = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double x = double(i - kWindow / 2);
    w[i] = std::exp(-x * x / (2.0 * sigma * sigma));
    sum += w[i];
  }
  for (double& v : w) v /= sum;
  return w;
}

struct Plane {
  std::vector<double> data;
  uint32_t w = 0, h = 0;

  double at(uint32_t x, uint32_t y) const { return data[size_t(y) * w + x]; }
};

Plane extract_channel(const TactileFrame& f, uint32_t ch) {
  Plane p;
  p.w = f.width;
  p.h = f.height;
  p.data.resize(size_t(f.width) * f.height);
  for (size_t i = 0; i < p.data.size(); ++i) p.data[i] = double(f.pixels[i * kChannels + ch]);
  return p;
}

// Separable 11-tap Gaussian, valid region only (dims shrink by 10).
Plane gauss_valid(const Plane& in) {
  static const std::array<double, kWindow> win = gaussian_window();
  Plane tmp;  // horizontal pass
  tmp.w = in.w - (kWindow - 1);
  tmp.h = in.h;
  tmp.data.resize(size_t(tmp.w) * tmp.h);
  for (uint32_t y = 0; y < tmp.h; ++y) {
    for (uint32_t x = 0; x < tmp.w; ++x) {
      double s = 0.0;
      for (int k = 0; k < kWindow; ++k) s += win[k] * in.at(x + k, y);
      tmp.data[size_t(y) * tmp.w + x] = s;
    }
  }
  Plane out;  // vertical pass
  out.w = tmp.w;
  out.h = tmp.h - (kWindow - 1);
  out.data.resize(size_t(out.w) * out.h);
  for (uint32_t y = 0; y < out.h; ++y) {
    for (uint32_t x = 0; x < out.w; ++x) {
      double s = 0.0;
      for (int k = 0; k < kWindow; ++k) s += win[k] * tmp.at(x, y + k);
      out.data[size_t(y) * out.w + x] = s;
    }
  }
  return out;
}

Plane multiply(const Plane& a, const Plane& b) {
  Plane out = a;
  for (size_t i = 0; i < out.data.size(); ++i) out.data[i] *= b.data[i];
  return out;
}

// 2x2 mean downsample with ceil(d/2) output dims; edge cells clamp.
Plane downsample2(const Plane& in) {
  Plane out;
  out.w = (in.w + 1) / 2;
  out.h = (in.h + 1) / 2;
  out.data.resize(size_t(out.w) * out.h);
  for (uint32_t y = 0; y < out.h; ++y) {
    for (uint32_t x = 0; x < out.w; ++x) {
      const uint32_t x1 = std::min(2 * x + 1, in.w - 1);
      const uint32_t y1 = std::min(2 * y + 1, in.h - 1);
      out.data[size_t(y) * out.w + x] =
          (in.at(2 * x, 2 * y) + in.at(x1, 2 * y) + in.at(2 * x, y1) + in.at(x1, y1)) / 4.0;
    }
  }
  return out;
}

struct ScaleScore {
  double cs;    // mean contrast-structure
  double ssim;  // mean full SSIM (luminance included)
};

ScaleScore ssim_scale(const Plane& a, const Plane& b) {
  constexpr double kC1 = (0.01 * 255) * (0.01 * 255);
  constexpr double kC2 = (0.03 * 255) * (0.03 * 255);

  const Plane mu_a = gauss_valid(a);
  const Plane mu_b = gauss_valid(b);
  const Plane aa = gauss_valid(multiply(a, a));
  const Plane bb = gauss_valid(multiply(b, b));
  const Plane ab = gauss_valid(multiply(a, b));

  double cs_sum = 0.0;
  double ssim_sum = 0.0;
  for (size_t i = 0; i < mu_a.data.size(); ++i) {
    const double ma = mu_a.data[i];
    const double mb = mu_b.data[i];
    const double va = aa.data[i] - ma * ma;
    const double vb = bb.data[i] - mb * mb;
    const double cov = ab.data[i] - ma * mb;
    const double cs = (2.0 * cov + kC2) / (va + vb + kC2);
    const double l = (2.0 * ma * mb + kC1) / (ma * ma + mb * mb + kC1);
    cs_sum += cs;
    ssim_sum += l * cs;
  }
  const double n = double(mu_a.data.size());
  return {cs_sum / n, ssim_sum / n};
}

}  // namespace

MsSsimResult ms_ssim_ex(const TactileFrame& a, const TactileFrame& b) {
  if (!a.same_dims(b)) fail(Err::kDimensionMismatch, "ms_ssim: frame dims differ");

  // Count how many dyadic scales keep both dims >= the window.
  int scales = 0;
  for (uint32_t w = a.width, h = a.height; scales < 5 && std::min(w, h) >= kWindow;
       w = (w + 1) / 2, h = (h + 1) / 2) {
    ++scales;
  }
  if (scales == 0) fail(Err::kTooSmallForAnyScale, "frame smaller than the 11x11 SSIM window");

  double weight_sum = 0.0;
  for (int j = 0; j < scales; ++j) weight_sum += kMsSsimWeights[j];

  double value = 1.0;
  for (uint32_t ch = 0; ch < kChannels; ++ch) {
    Plane pa = extract_channel(a, ch);
    Plane pb = extract_channel(b, ch);
    double channel_value = 1.0;
    for (int j = 0; j < scales; ++j) {
      const ScaleScore s = ssim_scale(pa, pb);
      const double w = kMsSsimWeights[j] / weight_sum;
      const double factor = (j == scales - 1) ? s.ssim : s.cs;
      // Slightly negative factors can occur on adversarial pairs; clamp so
      // the weighted geometric mean stays defined.
      channel_value *= std::pow(std::max(factor, 0.0), w);
      if (j + 1 < scales) {
        pa = downsample2(pa);
        pb = downsample2(pb);
      }
    }
    value = ch == 0 ? channel_value : value + channel_value;
  }
  return {value / double(kChannels), scales};
}

double ms_ssim(const TactileFrame& a, const TactileFrame& b) { return ms_ssim_ex(a, b).value; }

std::vector<double> rmse_map(const TactileFrame& a, const TactileFrame& b) {
  if (!a.same_dims(b)) fail(Err::kDimensionMismatch, "rmse_map: frame dims differ");
  std::vector<double> map(size_t(a.width) * a.height);
  for (size_t i = 0; i < map.size(); ++i) {
    double s = 0.0;
    for (uint32_t c = 0; c < kChannels; ++c) {
      const double d = double(a.pixels[i * kChannels + c]) - double(b.pixels[i * kChannels + c]);
      s += d * d;
    }
    map[i] = std::sqrt(s / double(kChannels));
  }
  return map;
}

void save_rmse_map(const std::vector<double>& map, uint32_t width, uint32_t height,
                   const std::filesystem::path& pgm_path, const std::filesystem::path& csv_path) {
  if (map.size() != size_t(width) * height) fail(Err::kDimensionMismatch, "rmse map size");
  double peak = 0.0;
  for (double v : map) peak = std::max(peak, v);
  const double scale = peak > 0.0 ? 255.0 / peak : 0.0;

  std::vector<uint8_t> gray(map.size());
  for (size_t i = 0; i < map.size(); ++i) {
    gray[i] = uint8_t(std::clamp(std::lround(map[i] * scale), 0l, 255l));
  }
  char comment[64];
  std::snprintf(comment, sizeof(comment), "rmse_scale=%.9g", scale);
  save_pgm(gray, width, height, pgm_path, comment);

  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) fail(Err::kUnwritableOutput, csv_path.string() + ": cannot open for writing");
  csv.precision(9);
  for (uint32_t y = 0; y < height; ++y) {
    for (uint32_t x = 0; x < width; ++x) {
      if (x) csv << ",";
      csv << map[size_t(y) * width + x];
    }
    csv << "\n";
  }
}

namespace {

// Monotone piecewise-cubic Hermite interpolant (Fritsch-Carlson slopes)
// with a closed-form antiderivative per segment.
class Pchip {
 public:
  Pchip(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const size_t n = x_.size();
    std::vector<double> h(n - 1), delta(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) {
      h[i] = x_[i + 1] - x_[i];
      delta[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    m_.resize(n);
    if (n == 2) {
      m_[0] = m_[1] = delta[0];
    } else {
      m_[0] = endpoint_slope(h[0], h[1], delta[0], delta[1]);
      m_[n - 1] = endpoint_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
      for (size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
          m_[i] = 0.0;
        } else {
          const double w1 = 2.0 * h[i] + h[i - 1];
          const double w2 = h[i] + 2.0 * h[i - 1];
          m_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
      }
    }
  }

  double eval(double x) const {
    const size_t i = segment(x);
    const double t = x - x_[i];
    const auto [c2, c3] = curvature(i);
    return y_[i] + t * (m_[i] + t * (c2 + t * c3));
  }

  // Integral of the interpolant over [a, b] within the knot span.
  double integrate(double a, double b) const {
    double total = 0.0;
    for (size_t i = 0; i + 1 < x_.size(); ++i) {
      const double lo = std::max(a, x_[i]);
      const double hi = std::min(b, x_[i + 1]);
      if (lo >= hi) continue;
      total += antiderivative(i, hi - x_[i]) - antiderivative(i, lo - x_[i]);
    }
    return total;
  }

 private:
  static double endpoint_slope(double h0, double h1, double d0, double d1) {
    double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (m * d0 <= 0.0) return 0.0;
    if (d0 * d1 < 0.0 && std::abs(m) > 3.0 * std::abs(d0)) return 3.0 * d0;
    return m;
  }

  size_t segment(double x) const {
    size_t i = x_.size() - 2;
    while (i > 0 && x < x_[i]) --i;
    return i;
  }

  std::pair<double, double> curvature(size_t i) const {
    const double h = x_[i + 1] - x_[i];
    const double d = (y_[i + 1] - y_[i]) / h;
    const double c2 = (3.0 * d - 2.0 * m_[i] - m_[i + 1]) / h;
    const double c3 = (m_[i] + m_[i + 1] - 2.0 * d) / (h * h);
    return {c2, c3};
  }

  double antiderivative(size_t i, double t) const {
    const auto [c2, c3] = curvature(i);
    return t * (y_[i] + t * (m_[i] / 2.0 + t * (c2 / 3.0 + t * c3 / 4.0)));
  }

  std::vector<double> x_, y_, m_;
};

struct BdCurve {
  std::vector<double> quality;
  std::vector<double> log_rate;
};

BdCurve validate_curve(const RdCurve& curve, BdQuality mode) {
  if (curve.points.size() < 4) {
    fail(Err::kInsufficientPoints, "bd_rate needs at least 4 points per curve");
  }
  BdCurve out;
  for (const RdPoint& p : curve.points) {
    double q;
    if (mode == BdQuality::kPsnr) {
      if (std::isinf(p.psnr)) {
        fail(Err::kNonMonotoneCurve,
             "curve contains an infinite-PSNR point; exclude lossless points from BD-Rate");
      }
      q = p.psnr;
    } else {
      if (!p.ms_ssim) fail(Err::kNonMonotoneCurve, "curve lacks MS-SSIM values");
      q = *p.ms_ssim;
    }
    if (!(p.bpp > 0.0)) fail(Err::kNonMonotoneCurve, "bpp must be positive");
    if (!out.quality.empty()) {
      if (out.log_rate.back() >= std::log10(p.bpp)) {
        fail(Err::kNonMonotoneCurve, "bpp must be strictly increasing");
      }
      if (out.quality.back() >= q) {
        fail(Err::kNonMonotoneCurve, "quality must be strictly increasing with bpp");
      }
    }
    out.quality.push_back(q);
    out.log_rate.push_back(std::log10(p.bpp));
  }
  return out;
}

}  // namespace

double bd_rate(const RdCurve& anchor, const RdCurve& test, BdQuality quality) {
  const BdCurve a = validate_curve(anchor, quality);
  const BdCurve t = validate_curve(test, quality);

  const double lo = std::max(a.quality.front(), t.quality.front());
  const double hi = std::min(a.quality.back(), t.quality.back());
  if (!(lo < hi)) fail(Err::kNoQualityOverlap, "quality ranges do not overlap");

  const Pchip fa(a.quality, a.log_rate);
  const Pchip ft(t.quality, t.log_rate);
  const double mean_diff = (ft.integrate(lo, hi) - fa.integrate(lo, hi)) / (hi - lo);
  return (std::pow(10.0, mean_diff) - 1.0) * 100.0;
}

double interpolate_log_rate(const RdCurve& curve, double quality, BdQuality mode) {
  const BdCurve c = validate_curve(curve, mode);
  return Pchip(c.quality, c.log_rate).eval(quality);
}

double bandwidth_mbps(double bpp, uint32_t width, uint32_t height, double fps) {
  if (!(bpp > 0.0) || width == 0 || height == 0 || !(fps > 0.0)) {
    fail(Err::kNonPositiveInput, "bandwidth_mbps: all inputs must be positive");
  }
  return bpp * double(width) * double(height) * fps * 1e-6;
}

double bpp_of(uint64_t bits, uint32_t width, uint32_t height) {
  if (width == 0 || height == 0) fail(Err::kZeroArea, "bpp_of: zero area");
  return double(bits) / (double(width) * double(height));
}

}  // namespace taco
