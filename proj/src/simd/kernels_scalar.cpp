#include "primforge/simd/kernels.hpp"

namespace pf::simd {

namespace {

void raster_span_scalar(const TriSetup& s, int y, int x0, int x1, float* zrow,
                        uint32_t* idrow, uint32_t id) {
  const double py = 16.0 * y + 8.0;
  const double r0 = s.b[0] * py + s.c[0];
  const double r1 = s.b[1] * py + s.c[1];
  const double r2 = s.b[2] * py + s.c[2];
  const double rz = s.zb * py + s.zc;
  for (int x = x0; x < x1; ++x) {
    const double px = 16.0 * x + 8.0;
    if (s.a[0] * px + r0 > 0 && s.a[1] * px + r1 > 0 && s.a[2] * px + r2 > 0) {
      float z = float(s.za * px + rz);
      if (z > zrow[x]) {
        zrow[x] = z;
        idrow[x] = id;
      }
    }
  }
}

uint64_t sum_sq_diff_scalar(const uint8_t* a, const uint8_t* b, size_t n) {
  uint64_t sum = 0;
  for (size_t i = 0; i < n; ++i) {
    int d = int(a[i]) - int(b[i]);
    sum += uint64_t(d * d);
  }
  return sum;
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{"scalar", raster_span_scalar, sum_sq_diff_scalar};
  return k;
}

}  // namespace pf::simd
