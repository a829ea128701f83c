#include <algorithm>
#include <cstdlib>

#include "taco/kernels.hpp"

namespace taco::kernels {

// Orthonormal DCT-II analysis basis, frozen as hexfloat literals so every
// build and platform uses identical constants (no libm at init).
const double kDctBasis[8][8] = {
    {0x1.6a09e667f3bcdp-2, 0x1.6a09e667f3bcdp-2, 0x1.6a09e667f3bcdp-2, 0x1.6a09e667f3bcdp-2,
     0x1.6a09e667f3bcdp-2, 0x1.6a09e667f3bcdp-2, 0x1.6a09e667f3bcdp-2, 0x1.6a09e667f3bcdp-2},
    {0x1.f6297cff75cb0p-2, 0x1.a9b66290ea1a3p-2, 0x1.1c73b39ae68c9p-2, 0x1.8f8b83c69a60dp-4,
     -0x1.8f8b83c69a608p-4, -0x1.1c73b39ae68c6p-2, -0x1.a9b66290ea1a4p-2, -0x1.f6297cff75cb0p-2},
    {0x1.d906bcf328d46p-2, 0x1.87de2a6aea964p-3, -0x1.87de2a6aea962p-3, -0x1.d906bcf328d46p-2,
     -0x1.d906bcf328d47p-2, -0x1.87de2a6aea96dp-3, 0x1.87de2a6aea967p-3, 0x1.d906bcf328d44p-2},
    {0x1.a9b66290ea1a3p-2, -0x1.8f8b83c69a608p-4, -0x1.f6297cff75cb0p-2, -0x1.1c73b39ae68c8p-2,
     0x1.1c73b39ae68c5p-2, 0x1.f6297cff75cb0p-2, 0x1.8f8b83c69a61dp-4, -0x1.a9b66290ea1a2p-2},
    {0x1.6a09e667f3bcdp-2, -0x1.6a09e667f3bccp-2, -0x1.6a09e667f3bcep-2, 0x1.6a09e667f3bcbp-2,
     0x1.6a09e667f3bcep-2, -0x1.6a09e667f3bc5p-2, -0x1.6a09e667f3bc9p-2, 0x1.6a09e667f3bc4p-2},
    {0x1.1c73b39ae68c9p-2, -0x1.f6297cff75cb0p-2, 0x1.8f8b83c69a60cp-4, 0x1.a9b66290ea1a5p-2,
     -0x1.a9b66290ea1a2p-2, -0x1.8f8b83c69a602p-4, 0x1.f6297cff75cb2p-2, -0x1.1c73b39ae68c2p-2},
    {0x1.87de2a6aea964p-3, -0x1.d906bcf328d47p-2, 0x1.d906bcf328d44p-2, -0x1.87de2a6aea965p-3,
     -0x1.87de2a6aea971p-3, 0x1.d906bcf328d46p-2, -0x1.d906bcf328d43p-2, 0x1.87de2a6aea95fp-3},
    {0x1.8f8b83c69a60dp-4, -0x1.1c73b39ae68c8p-2, 0x1.a9b66290ea1a5p-2, -0x1.f6297cff75cb2p-2,
     0x1.f6297cff75cb0p-2, -0x1.a9b66290ea1a1p-2, 0x1.1c73b39ae68c2p-2, -0x1.8f8b83c69a616p-4},
};

const double kDctBasisT[8][8] = {
    {kDctBasis[0][0], kDctBasis[1][0], kDctBasis[2][0], kDctBasis[3][0], kDctBasis[4][0],
     kDctBasis[5][0], kDctBasis[6][0], kDctBasis[7][0]},
    {kDctBasis[0][1], kDctBasis[1][1], kDctBasis[2][1], kDctBasis[3][1], kDctBasis[4][1],
     kDctBasis[5][1], kDctBasis[6][1], kDctBasis[7][1]},
    {kDctBasis[0][2], kDctBasis[1][2], kDctBasis[2][2], kDctBasis[3][2], kDctBasis[4][2],
     kDctBasis[5][2], kDctBasis[6][2], kDctBasis[7][2]},
    {kDctBasis[0][3], kDctBasis[1][3], kDctBasis[2][3], kDctBasis[3][3], kDctBasis[4][3],
     kDctBasis[5][3], kDctBasis[6][3], kDctBasis[7][3]},
    {kDctBasis[0][4], kDctBasis[1][4], kDctBasis[2][4], kDctBasis[3][4], kDctBasis[4][4],
     kDctBasis[5][4], kDctBasis[6][4], kDctBasis[7][4]},
    {kDctBasis[0][5], kDctBasis[1][5], kDctBasis[2][5], kDctBasis[3][5], kDctBasis[4][5],
     kDctBasis[5][5], kDctBasis[6][5], kDctBasis[7][5]},
    {kDctBasis[0][6], kDctBasis[1][6], kDctBasis[2][6], kDctBasis[3][6], kDctBasis[4][6],
     kDctBasis[5][6], kDctBasis[6][6], kDctBasis[7][6]},
    {kDctBasis[0][7], kDctBasis[1][7], kDctBasis[2][7], kDctBasis[3][7], kDctBasis[4][7],
     kDctBasis[5][7], kDctBasis[6][7], kDctBasis[7][7]},
};

namespace scalar {

// Separable 2D transform: columns through `col`, then rows through `row`T.
// The accumulation order (k ascending) is the contract the SIMD variant
// reproduces per lane.
static void transform8x8(const double* in, double* out, const double (&col)[8][8],
                         const double (&rowT)[8][8]) {
  double tmp[64];
  for (int u = 0; u < 8; ++u) {
    for (int c = 0; c < 8; ++c) {
      double s = 0.0;
      for (int k = 0; k < 8; ++k) s += col[u][k] * in[k * 8 + c];
      tmp[u * 8 + c] = s;
    }
  }
  for (int u = 0; u < 8; ++u) {
    for (int v = 0; v < 8; ++v) {
      double s = 0.0;
      for (int k = 0; k < 8; ++k) s += tmp[u * 8 + k] * rowT[k][v];
      out[u * 8 + v] = s;
    }
  }
}

void dct8x8_forward(const double* in, double* out) {
  transform8x8(in, out, kDctBasis, kDctBasisT);
}

void dct8x8_inverse(const double* in, double* out) {
  transform8x8(in, out, kDctBasisT, kDctBasis);
}

void ycocgr_forward(const uint8_t* rgb, int16_t* y, int16_t* co, int16_t* cg, size_t n) {
  for (size_t i = 0; i < n; ++i) {
    int r = rgb[3 * i + 0];
    int g = rgb[3 * i + 1];
    int b = rgb[3 * i + 2];
    int co_v = r - b;
    int t = b + (co_v >> 1);
    int cg_v = g - t;
    y[i] = int16_t(t + (cg_v >> 1));
    co[i] = int16_t(co_v);
    cg[i] = int16_t(cg_v);
  }
}

void ycocgr_inverse(const int16_t* y, const int16_t* co, const int16_t* cg, uint8_t* rgb,
                    size_t n) {
  for (size_t i = 0; i < n; ++i) {
    int t = y[i] - (cg[i] >> 1);
    int g = cg[i] + t;
    int b = t - (co[i] >> 1);
    int r = b + co[i];
    rgb[3 * i + 0] = uint8_t(std::clamp(r, 0, 255));
    rgb[3 * i + 1] = uint8_t(std::clamp(g, 0, 255));
    rgb[3 * i + 2] = uint8_t(std::clamp(b, 0, 255));
  }
}

uint64_t sse_u8(const uint8_t* a, const uint8_t* b, size_t n) {
  uint64_t acc = 0;
  for (size_t i = 0; i < n; ++i) {
    int d = int(a[i]) - int(b[i]);
    acc += uint64_t(d * d);
  }
  return acc;
}

void med_residuals(const uint8_t* patch, uint8_t* residuals, uint8_t* grads) {
  for (int r = 0; r < 16; ++r) {
    for (int c = 0; c < 16; ++c) {
      for (int ch = 0; ch < 3; ++ch) {
        const int idx = 3 * (r * 16 + c) + ch;
        int left = c > 0 ? patch[idx - 3] : 0;
        int above = r > 0 ? patch[idx - 48] : 0;
        int aboveleft = (r > 0 && c > 0) ? patch[idx - 51] : 0;
        int grad_est = left + above - aboveleft;
        int med = std::max(std::min(left, above), std::min(std::max(left, above), grad_est));
        residuals[idx] = uint8_t(patch[idx] - med);
        grads[idx] = uint8_t(std::abs(left - above));
      }
    }
  }
}

}  // namespace scalar

const KernelTable& scalar_kernels() {
  static const KernelTable table = {
      scalar::dct8x8_forward, scalar::dct8x8_inverse, scalar::ycocgr_forward,
      scalar::ycocgr_inverse, scalar::sse_u8,         scalar::med_residuals,
      "scalar",
  };
  return table;
}

}  // namespace taco::kernels
