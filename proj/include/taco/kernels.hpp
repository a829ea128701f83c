#pragma once

#include <cstddef>
#include <cstdint>

namespace taco::kernels {

// Hot arithmetic loops exist as a scalar reference and (on x86-64) an AVX2
// variant selected at runtime. Variants are exact-equivalent: integer kernels
// match bit-for-bit by construction; the double kernels perform the same
// operation sequence per lane and the build disables FP contraction, so they
// match bit-for-bit too. The equivalence suite asserts this.
struct KernelTable {
  // Orthonormal 8x8 DCT-II / DCT-III on row-major blocks of 64 doubles.
  void (*dct8x8_forward)(const double* in, double* out);
  void (*dct8x8_inverse)(const double* in, double* out);

  // Reversible YCoCg-R color transform; interleaved 8-bit RGB <-> planar
  // int16. The inverse clamps each output channel to [0,255]. Inverse inputs
  // must lie in [-8192, 8191] (quantization-perturbed planes are clamped by
  // the caller before this is reached).
  void (*ycocgr_forward)(const uint8_t* rgb, int16_t* y, int16_t* co, int16_t* cg, size_t n);
  void (*ycocgr_inverse)(const int16_t* y, const int16_t* co, const int16_t* cg, uint8_t* rgb,
                         size_t n);

  // Sum of squared differences over 8-bit samples.
  uint64_t (*sse_u8)(const uint8_t* a, const uint8_t* b, size_t n);

  // Median-edge-detector residuals over one 16x16x3 channel-interleaved
  // patch. Out-of-patch neighbors read as zero. Emits, in token order,
  // residual = (x - median(left, above, left+above-aboveleft)) mod 256 and
  // grad = |left - above| (the context driver).
  void (*med_residuals)(const uint8_t* patch, uint8_t* residuals, uint8_t* grads);

  const char* name;
};

const KernelTable& scalar_kernels();

// Null when the binary lacks the AVX2 translation unit or the CPU lacks AVX2.
const KernelTable* avx2_kernels();

// Runtime-selected table: AVX2 when available, else scalar. The environment
// variable TACO_KERNELS=scalar forces the reference path.
const KernelTable& active_kernels();

// DCT basis, exported for the transform tests (Parseval, orthonormality).
extern const double kDctBasis[8][8];   // kDctBasis[u][k], analysis rows
extern const double kDctBasisT[8][8];  // transpose

}  // namespace taco::kernels
