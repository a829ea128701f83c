// AVX2 variants. Compiled with -mavx2 only; selection happens at runtime in
// kernels_dispatch.cpp. Each kernel reproduces the scalar reference exactly:
// integer ops are identical, and the double paths run the same multiply/add
// sequence per lane (FP contraction is disabled project-wide).

#include <immintrin.h>

#include <algorithm>
#include <array>
#include <cstring>

#include "taco/kernels.hpp"

namespace taco::kernels {
namespace avx2 {

namespace {

// ---- 8x8 DCT ----

void transform8x8(const double* in, double* out, const double (&col)[8][8],
                  const double (&rowT)[8][8]) {
  double tmp[64];
  for (int u = 0; u < 8; ++u) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    for (int k = 0; k < 8; ++k) {
      const __m256d coef = _mm256_set1_pd(col[u][k]);
      acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(coef, _mm256_loadu_pd(in + k * 8)));
      acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(coef, _mm256_loadu_pd(in + k * 8 + 4)));
    }
    _mm256_storeu_pd(tmp + u * 8, acc0);
    _mm256_storeu_pd(tmp + u * 8 + 4, acc1);
  }
  for (int u = 0; u < 8; ++u) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    for (int k = 0; k < 8; ++k) {
      const __m256d t = _mm256_set1_pd(tmp[u * 8 + k]);
      acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(t, _mm256_loadu_pd(&rowT[k][0])));
      acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(t, _mm256_loadu_pd(&rowT[k][4])));
    }
    _mm256_storeu_pd(out + u * 8, acc0);
    _mm256_storeu_pd(out + u * 8 + 4, acc1);
  }
}

// ---- RGB (de)interleave shuffle masks, 16 pixels / 48 bytes per step ----

struct ShuffleMasks {
  // de[ch][s]: pick channel ch bytes out of source register s into pixel order
  std::array<std::array<std::array<uint8_t, 16>, 3>, 3> de;
  // il[o][ch]: place channel ch bytes into output register o, interleaved
  std::array<std::array<std::array<uint8_t, 16>, 3>, 3> il;
};

ShuffleMasks make_masks() {
  ShuffleMasks m;
  for (auto& a : m.de)
    for (auto& b : a) b.fill(0x80);
  for (auto& a : m.il)
    for (auto& b : a) b.fill(0x80);
  for (int p = 0; p < 16; ++p) {
    for (int ch = 0; ch < 3; ++ch) {
      const int g = 3 * p + ch;
      m.de[ch][g / 16][p] = uint8_t(g % 16);
      m.il[g / 16][ch][g % 16] = uint8_t(p);
    }
  }
  return m;
}

const ShuffleMasks kMasks = make_masks();

inline __m128i load_mask(const std::array<uint8_t, 16>& m) {
  return _mm_loadu_si128(reinterpret_cast<const __m128i*>(m.data()));
}

inline __m128i deinterleave(__m128i v0, __m128i v1, __m128i v2, int ch) {
  __m128i r = _mm_shuffle_epi8(v0, load_mask(kMasks.de[ch][0]));
  r = _mm_or_si128(r, _mm_shuffle_epi8(v1, load_mask(kMasks.de[ch][1])));
  return _mm_or_si128(r, _mm_shuffle_epi8(v2, load_mask(kMasks.de[ch][2])));
}

inline __m128i interleave(__m128i r, __m128i g, __m128i b, int out_reg) {
  __m128i v = _mm_shuffle_epi8(r, load_mask(kMasks.il[out_reg][0]));
  v = _mm_or_si128(v, _mm_shuffle_epi8(g, load_mask(kMasks.il[out_reg][1])));
  return _mm_or_si128(v, _mm_shuffle_epi8(b, load_mask(kMasks.il[out_reg][2])));
}

// 16 epi16 lanes -> 16 bytes (values must already be in [0,255])
inline __m128i pack_u8(__m256i v) {
  const __m256i packed = _mm256_packus_epi16(v, v);
  return _mm256_castsi256_si128(_mm256_permute4x64_epi64(packed, 0x08));
}

inline __m128i xmm_load(const uint8_t* p) {
  return _mm_loadu_si128(reinterpret_cast<const __m128i*>(p));
}

}  // namespace

void dct8x8_forward(const double* in, double* out) {
  transform8x8(in, out, kDctBasis, kDctBasisT);
}

void dct8x8_inverse(const double* in, double* out) {
  transform8x8(in, out, kDctBasisT, kDctBasis);
}

void ycocgr_forward(const uint8_t* rgb, int16_t* y, int16_t* co, int16_t* cg, size_t n) {
  size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    const uint8_t* p = rgb + 3 * i;
    const __m128i v0 = xmm_load(p);
    const __m128i v1 = xmm_load(p + 16);
    const __m128i v2 = xmm_load(p + 32);
    const __m256i r16 = _mm256_cvtepu8_epi16(deinterleave(v0, v1, v2, 0));
    const __m256i g16 = _mm256_cvtepu8_epi16(deinterleave(v0, v1, v2, 1));
    const __m256i b16 = _mm256_cvtepu8_epi16(deinterleave(v0, v1, v2, 2));

    const __m256i co16 = _mm256_sub_epi16(r16, b16);
    const __m256i t16 = _mm256_add_epi16(b16, _mm256_srai_epi16(co16, 1));
    const __m256i cg16 = _mm256_sub_epi16(g16, t16);
    const __m256i y16 = _mm256_add_epi16(t16, _mm256_srai_epi16(cg16, 1));

    _mm256_storeu_si256(reinterpret_cast<__m256i*>(y + i), y16);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(co + i), co16);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(cg + i), cg16);
  }
  for (; i < n; ++i) {
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
  const __m256i zero = _mm256_setzero_si256();
  const __m256i v255 = _mm256_set1_epi16(255);
  size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    const __m256i y16 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(y + i));
    const __m256i co16 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(co + i));
    const __m256i cg16 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(cg + i));

    const __m256i t16 = _mm256_sub_epi16(y16, _mm256_srai_epi16(cg16, 1));
    const __m256i g16 = _mm256_add_epi16(cg16, t16);
    const __m256i b16 = _mm256_sub_epi16(t16, _mm256_srai_epi16(co16, 1));
    const __m256i r16 = _mm256_add_epi16(b16, co16);

    const __m128i r8 = pack_u8(_mm256_min_epi16(_mm256_max_epi16(r16, zero), v255));
    const __m128i g8 = pack_u8(_mm256_min_epi16(_mm256_max_epi16(g16, zero), v255));
    const __m128i b8 = pack_u8(_mm256_min_epi16(_mm256_max_epi16(b16, zero), v255));

    uint8_t* p = rgb + 3 * i;
    _mm_storeu_si128(reinterpret_cast<__m128i*>(p), interleave(r8, g8, b8, 0));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(p + 16), interleave(r8, g8, b8, 1));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(p + 32), interleave(r8, g8, b8, 2));
  }
  for (; i < n; ++i) {
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
  const __m256i zero = _mm256_setzero_si256();
  uint64_t total = 0;
  size_t i = 0;
  while (i + 32 <= n) {
    // Flush the 32-bit accumulator before it can overflow: each iteration
    // adds at most 2 * 2 * 255^2 = 260100 per lane, so 8192 iterations stay
    // below 2^31.
    const size_t chunk_end = std::min(n - (n - i) % 32, i + size_t(8192) * 32);
    __m256i acc = _mm256_setzero_si256();
    for (; i + 32 <= chunk_end; i += 32) {
      const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
      const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
      const __m256i d =
          _mm256_or_si256(_mm256_subs_epu8(va, vb), _mm256_subs_epu8(vb, va));
      const __m256i dlo = _mm256_unpacklo_epi8(d, zero);
      const __m256i dhi = _mm256_unpackhi_epi8(d, zero);
      acc = _mm256_add_epi32(acc, _mm256_madd_epi16(dlo, dlo));
      acc = _mm256_add_epi32(acc, _mm256_madd_epi16(dhi, dhi));
    }
    alignas(32) uint32_t lanes[8];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    for (uint32_t lane : lanes) total += lane;
  }
  for (; i < n; ++i) {
    int d = int(a[i]) - int(b[i]);
    total += uint64_t(d * d);
  }
  return total;
}

void med_residuals(const uint8_t* patch, uint8_t* residuals, uint8_t* grads) {
  alignas(16) uint8_t plane[256];
  alignas(16) uint8_t res_plane[256];
  alignas(16) uint8_t grad_plane[256];

  for (int ch = 0; ch < 3; ++ch) {
    for (int i = 0; i < 256; ++i) plane[i] = patch[3 * i + ch];

    __m128i prev_row = _mm_setzero_si128();
    for (int r = 0; r < 16; ++r) {
      const __m128i row = _mm_load_si128(reinterpret_cast<const __m128i*>(plane + r * 16));
      const __m128i left8 = _mm_slli_si128(row, 1);
      const __m128i aboveleft8 = _mm_slli_si128(prev_row, 1);

      const __m256i x = _mm256_cvtepu8_epi16(row);
      const __m256i l = _mm256_cvtepu8_epi16(left8);
      const __m256i a = _mm256_cvtepu8_epi16(prev_row);
      const __m256i al = _mm256_cvtepu8_epi16(aboveleft8);

      const __m256i est = _mm256_sub_epi16(_mm256_add_epi16(l, a), al);
      const __m256i lo = _mm256_min_epi16(l, a);
      const __m256i hi = _mm256_max_epi16(l, a);
      const __m256i med = _mm256_max_epi16(lo, _mm256_min_epi16(hi, est));

      const __m256i res = _mm256_and_si256(_mm256_sub_epi16(x, med), _mm256_set1_epi16(0xFF));
      const __m256i grad = _mm256_abs_epi16(_mm256_sub_epi16(l, a));

      _mm_store_si128(reinterpret_cast<__m128i*>(res_plane + r * 16), pack_u8(res));
      _mm_store_si128(reinterpret_cast<__m128i*>(grad_plane + r * 16), pack_u8(grad));
      prev_row = row;
    }

    for (int i = 0; i < 256; ++i) {
      residuals[3 * i + ch] = res_plane[i];
      grads[3 * i + ch] = grad_plane[i];
    }
  }
}

}  // namespace avx2

const KernelTable* avx2_kernels_table() {
  static const KernelTable table = {
      avx2::dct8x8_forward, avx2::dct8x8_inverse, avx2::ycocgr_forward,
      avx2::ycocgr_inverse, avx2::sse_u8,         avx2::med_residuals,
      "avx2",
  };
  return &table;
}

}  // namespace taco::kernels
