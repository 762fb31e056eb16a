#pragma once
// Inner loops of the rasterizer and the image metric. Each kernel has a scalar
// reference and an AVX2 variant; both produce bitwise-identical results.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace pf::simd {

/// Per-triangle raster setup in 1/16-pixel fixed point stored as doubles.
/// Pixel (x, y) is sampled at px = 16x + 8, py = 16y + 8.
/// Edge k covers the sample when a[k]*px + (b[k]*py + c[k]) > 0; the fill-rule
/// bias is already folded into c. Depth key is za*px + (zb*py + zc), rounded
/// to float; larger is closer.
struct TriSetup {
  double a[3];
  double b[3];
  double c[3];
  double za, zb, zc;
};

// Writes `id` and the depth key into row slots [x0, x1) that the triangle
// covers and where the key is strictly greater than the stored one.
using RasterSpanFn = void (*)(const TriSetup& s, int y, int x0, int x1, float* zrow,
                              uint32_t* idrow, uint32_t id);

// Sum over i of (a[i] - b[i])^2.
using SumSqDiffFn = uint64_t (*)(const uint8_t* a, const uint8_t* b, size_t n);

struct Kernels {
  std::string_view name;
  RasterSpanFn raster_span;
  SumSqDiffFn sum_sq_diff_u8;
};

const Kernels& scalar_kernels();
// nullptr when the build or the CPU lacks AVX2.
const Kernels* avx2_kernels();

// Chosen once per process: AVX2 when available, unless PRIMFORGE_SIMD=scalar.
const Kernels& active_kernels();

}  // namespace pf::simd
