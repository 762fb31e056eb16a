#include "primforge/rng.hpp"

#include <algorithm>
#include <cmath>

#include "primforge/error.hpp"

namespace pf {

uint64_t fnv1a64(std::span<const unsigned char> bytes) {
  uint64_t h = 0xCBF29CE484222325ull;
  for (auto b : bytes) {
    h ^= b;
    h *= 0x100000001B3ull;
  }
  return h;
}

uint64_t Rng::uniform_int(uint64_t n) {
  if (n == 0) throw Error(Errc::invalid_parameter, "uniform_int over an empty range");
  // Lemire's multiply-shift with rejection of the biased low zone.
  uint64_t x = next_u64();
  __uint128_t m = __uint128_t(x) * n;
  auto low = uint64_t(m);
  if (low < n) {
    uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      x = next_u64();
      m = __uint128_t(x) * n;
      low = uint64_t(m);
    }
  }
  return uint64_t(m >> 64);
}

size_t Rng::categorical(std::span<const double> weights) {
  double total = 0;
  for (double w : weights) {
    if (!(w >= 0)) throw Error(Errc::invalid_parameter, "negative categorical weight");
    total += w;
  }
  if (!(total > 0)) throw Error(Errc::invalid_parameter, "categorical weights sum to zero");
  double r = uniform() * total;
  double acc = 0;
  size_t last = 0;
  for (size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0) continue;
    acc += weights[i];
    last = i;
    if (r < acc) return i;
  }
  return last;
}

Vec3 Rng::unit_vector() {
  // uniform z and azimuth (Archimedes)
  double z = uniform(-1.0, 1.0);
  double phi = uniform(0.0, 2 * pi);
  double r = std::sqrt(std::max(0.0, 1 - z * z));
  return {r * std::cos(phi), r * std::sin(phi), z};
}

Quat Rng::uniform_rotation() {
  // Shoemake's subgroup algorithm
  double u1 = uniform(), u2 = uniform(), u3 = uniform();
  double a = std::sqrt(1 - u1), b = std::sqrt(u1);
  Quat q{a * std::sin(2 * pi * u2), a * std::cos(2 * pi * u2), b * std::sin(2 * pi * u3),
         b * std::cos(2 * pi * u3)};
  double n = norm(q);
  return {q.w / n, q.x / n, q.y / n, q.z / n};
}

}  // namespace pf
