// Compiled with -mavx2; only reached after a runtime CPU check.
#include <immintrin.h>

#include <algorithm>

#include "primforge/simd/kernels.hpp"

namespace pf::simd {

namespace {

void raster_span_avx2(const TriSetup& s, int y, int x0, int x1, float* zrow,
                      uint32_t* idrow, uint32_t id) {
  const double py = 16.0 * y + 8.0;
  const double r0 = s.b[0] * py + s.c[0];
  const double r1 = s.b[1] * py + s.c[1];
  const double r2 = s.b[2] * py + s.c[2];
  const double rz = s.zb * py + s.zc;

  const __m256d a0 = _mm256_set1_pd(s.a[0]), a1 = _mm256_set1_pd(s.a[1]);
  const __m256d a2 = _mm256_set1_pd(s.a[2]), az = _mm256_set1_pd(s.za);
  const __m256d vr0 = _mm256_set1_pd(r0), vr1 = _mm256_set1_pd(r1);
  const __m256d vr2 = _mm256_set1_pd(r2), vrz = _mm256_set1_pd(rz);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d step = _mm256_set1_pd(64.0);
  const __m128i vid = _mm_set1_epi32(int(id));

  int x = x0;
  __m256d px = _mm256_setr_pd(16.0 * x + 8.0, 16.0 * x + 24.0, 16.0 * x + 40.0, 16.0 * x + 56.0);
  for (; x + 4 <= x1; x += 4, px = _mm256_add_pd(px, step)) {
    __m256d e0 = _mm256_add_pd(_mm256_mul_pd(a0, px), vr0);
    __m256d e1 = _mm256_add_pd(_mm256_mul_pd(a1, px), vr1);
    __m256d e2 = _mm256_add_pd(_mm256_mul_pd(a2, px), vr2);
    __m256d in = _mm256_and_pd(_mm256_cmp_pd(e0, zero, _CMP_GT_OQ),
                               _mm256_and_pd(_mm256_cmp_pd(e1, zero, _CMP_GT_OQ),
                                             _mm256_cmp_pd(e2, zero, _CMP_GT_OQ)));
    if (_mm256_testz_pd(in, in)) continue;
    // 4 x 64-bit mask -> 4 x 32-bit mask
    __m128 in32 = _mm256_castps256_ps128(
        _mm256_permutevar8x32_ps(_mm256_castpd_ps(in), _mm256_setr_epi32(0, 2, 4, 6, 0, 2, 4, 6)));

    __m128 z = _mm256_cvtpd_ps(_mm256_add_pd(_mm256_mul_pd(az, px), vrz));
    __m128 old = _mm_loadu_ps(zrow + x);
    __m128 take = _mm_and_ps(in32, _mm_cmpgt_ps(z, old));
    _mm_storeu_ps(zrow + x, _mm_blendv_ps(old, z, take));
    __m128i oldid = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idrow + x));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(idrow + x),
                     _mm_castps_si128(_mm_blendv_ps(_mm_castsi128_ps(oldid),
                                                    _mm_castsi128_ps(vid), take)));
  }
  for (; x < x1; ++x) {
    const double pxs = 16.0 * x + 8.0;
    if (s.a[0] * pxs + r0 > 0 && s.a[1] * pxs + r1 > 0 && s.a[2] * pxs + r2 > 0) {
      float z = float(s.za * pxs + rz);
      if (z > zrow[x]) {
        zrow[x] = z;
        idrow[x] = id;
      }
    }
  }
}

uint64_t sum_sq_diff_avx2(const uint8_t* a, const uint8_t* b, size_t n) {
  size_t i = 0;
  __m256i acc = _mm256_setzero_si256();
  // each madd lane sums two squares <= 2 * 255^2; flush to 64 bits often
  while (i + 32 <= n) {
    __m256i acc32 = _mm256_setzero_si256();
    size_t stop = std::min(n - 31, i + 32 * 1024);
    for (; i < stop; i += 32) {
      __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
      __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
      __m256i lo = _mm256_sub_epi16(_mm256_unpacklo_epi8(va, _mm256_setzero_si256()),
                                    _mm256_unpacklo_epi8(vb, _mm256_setzero_si256()));
      __m256i hi = _mm256_sub_epi16(_mm256_unpackhi_epi8(va, _mm256_setzero_si256()),
                                    _mm256_unpackhi_epi8(vb, _mm256_setzero_si256()));
      acc32 = _mm256_add_epi32(acc32, _mm256_madd_epi16(lo, lo));
      acc32 = _mm256_add_epi32(acc32, _mm256_madd_epi16(hi, hi));
    }
    acc = _mm256_add_epi64(acc, _mm256_cvtepu32_epi64(_mm256_castsi256_si128(acc32)));
    acc = _mm256_add_epi64(acc, _mm256_cvtepu32_epi64(_mm256_extracti128_si256(acc32, 1)));
  }
  alignas(32) uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  uint64_t sum = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) {
    int d = int(a[i]) - int(b[i]);
    sum += uint64_t(d * d);
  }
  return sum;
}

}  // namespace

const Kernels* avx2_kernels_impl() {
  static const Kernels k{"avx2", raster_span_avx2, sum_sq_diff_avx2};
  return &k;
}

}  // namespace pf::simd
