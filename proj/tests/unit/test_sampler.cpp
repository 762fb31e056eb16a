#include <doctest.h>

#include <array>
#include <cmath>
#include <cstring>
#include <set>

#include "primforge/error.hpp"
#include "primforge/mesh.hpp"
#include "primforge/rng.hpp"
#include "primforge/sampler.hpp"

using namespace pf;

TEST_CASE("rng streams are reproducible and forks independent") {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    uint64_t x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
  }
  Rng root(9);
  Rng f1 = root.fork(1), f2 = root.fork(2), f1b = root.fork(1);
  CHECK(f1.next_u64() == f1b.next_u64());
  CHECK(f1.next_u64() != f2.next_u64());
  // forking does not consume the parent
  Rng p1(9), p2(9);
  (void)p1.fork(7);
  CHECK(p1.next_u64() == p2.next_u64());
}

TEST_CASE("rng uniform and categorical") {
  Rng rng(1);
  double sum = 0;
  for (int i = 0; i < 100000; ++i) {
    double u = rng.uniform();
    REQUIRE(u >= 0);
    REQUIRE(u < 1);
    sum += u;
  }
  CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
  std::array<int, 3> hits{};
  std::vector<double> w{1, 0, 3};
  for (int i = 0; i < 40000; ++i) ++hits[rng.categorical(w)];
  CHECK(hits[1] == 0);
  CHECK(hits[0] / 40000.0 == doctest::Approx(0.25).epsilon(0.05));
  for (int i = 0; i < 1000; ++i) CHECK(rng.uniform_int(7) < 7);
}

TEST_CASE("primitive count distribution") {
  SamplerConfig cfg;
  const double weights[9] = {5, 5, 5, 5, 5, 4, 3, 2, 1};
  CHECK(weights[0] / 35 == doctest::Approx(0.1429).epsilon(1e-3));
  CHECK(weights[8] / 35 == doctest::Approx(0.0286).epsilon(1e-2));
  Rng rng(2024);
  const int n = 350000;
  std::array<int, 10> hist{};
  for (int i = 0; i < n; ++i) {
    int c = sample_primitive_count(rng, cfg);
    REQUIRE(c >= 1);
    REQUIRE(c <= 9);
    ++hist[size_t(c)];
  }
  double chi2 = 0;
  for (int k = 1; k <= 9; ++k) {
    double p = weights[k - 1] / 35;
    CHECK(std::abs(hist[size_t(k)] / double(n) - p) < 0.005);
    double e = p * n;
    chi2 += (hist[size_t(k)] - e) * (hist[size_t(k)] - e) / e;
  }
  // chi-square with 8 dof: p = 0.001 at 26.12
  CHECK(chi2 < 26.12);
}

TEST_CASE("count weights config") {
  SamplerConfig cfg;
  cfg.count_weights = {0, 0, 1};
  Rng rng(3);
  for (int i = 0; i < 100; ++i) CHECK(sample_primitive_count(rng, cfg) == 3);
  cfg.count_weights = {0, 0};
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.count_weights = {1, -1};
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("transform sampling") {
  Rng rng(77);
  Vec3 axis_sum{};
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    Transform t = sample_transform(rng, 0.15, 0.6);
    REQUIRE(t.valid());
    for (double c : {t.translation.x, t.translation.y, t.translation.z}) {
      REQUIRE(c >= -1);
      REQUIRE(c <= 1);
    }
    for (double s : {t.scale.x, t.scale.y, t.scale.z}) {
      REQUIRE(s >= 0.15);
      REQUIRE(s <= 0.6);
    }
    const Quat& q = t.rotation;
    Vec3 v{q.x, q.y, q.z};
    double len = length(v);
    // q and -q are the same rotation; fix the sign with w >= 0
    if (len > 1e-12) axis_sum += v * ((q.w >= 0 ? 1.0 : -1.0) / len);
  }
  CHECK(length(axis_sum / double(n)) < 0.02);

  Transform fixed = sample_transform(rng, 0.3, 0.3);
  CHECK(fixed.scale.x == 0.3);
  CHECK(fixed.scale.y == 0.3);
  CHECK(fixed.scale.z == 0.3);
  CHECK_THROWS_AS(sample_transform(rng, 0.5, 0.2), Error);
  CHECK_THROWS_AS(sample_transform(rng, 0.0, 0.2), Error);
}

TEST_CASE("uniform rotations rotate vectors isotropically") {
  Rng rng(8);
  Vec3 sum{};
  for (int i = 0; i < 100000; ++i) sum += rotate(rng.uniform_rotation(), Vec3{0, 0, 1});
  CHECK(length(sum / 1e5) < 0.02);
}

TEST_CASE("compose is deterministic") {
  SamplerConfig cfg;
  for (uint64_t seed : {1ull, 2ull, 99ull}) {
    Rng a(seed), b(seed);
    ComposedObject x = compose(a, cfg), y = compose(b, cfg);
    REQUIRE(x.mesh.positions.size() == y.mesh.positions.size());
    CHECK(std::memcmp(x.mesh.positions.data(), y.mesh.positions.data(),
                      x.mesh.positions.size() * sizeof(Vec3)) == 0);
    CHECK(x.mesh.triangles == y.mesh.triangles);
    CHECK(x.mesh.groups == y.mesh.groups);
    CHECK(x.instances.size() == y.instances.size());
  }
}

TEST_CASE("composed surface groups match instances") {
  SamplerConfig cfg;
  cfg.tessellation.sphere_rings = 8;
  cfg.tessellation.sphere_segments = 16;
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    ComposedObject o = compose(rng, cfg);
    int expect = 0;
    for (const auto& p : o.instances) expect += surface_group_count(p.kind);
    CHECK(o.mesh.group_count() == expect);
    CHECK(o.surface_count() == expect);
    CHECK(o.instances.size() >= 1);
    CHECK(o.instances.size() <= 9);
    int64_t chi = 0;
    for (const auto& p : o.instances) chi += p.kind == PrimitiveKind::torus ? 0 : 2;
    CHECK(euler_characteristic(o.mesh) == chi);
  }
}

TEST_CASE("single torus composition") {
  SamplerConfig cfg;
  cfg.count_weights = {1};
  cfg.primitive_pool = {PrimitiveKind::torus};
  Rng rng(4);
  ComposedObject o = compose(rng, cfg);
  CHECK(o.instances.size() == 1);
  CHECK(euler_characteristic(o.mesh) == 0);
}

TEST_CASE("kind selection is uniform") {
  SamplerConfig cfg;
  Rng rng(31);
  std::array<int, 5> hist{};
  int total = 0;
  for (int i = 0; i < 100000; ++i) {
    for (const auto& p : sample_instances(rng, cfg)) {
      ++hist[size_t(p.kind)];
      ++total;
    }
  }
  for (int h : hist) CHECK(std::abs(h / double(total) - 0.2) < 0.01);
}
