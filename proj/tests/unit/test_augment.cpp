#include <doctest.h>

#include <array>
#include <cmath>
#include <set>

#include "primforge/augment.hpp"
#include "primforge/error.hpp"
#include "primforge/mesh.hpp"
#include "primforge/sampler.hpp"
#include "primforge/texture.hpp"

using namespace pf;

namespace {

SamplerConfig light_sampler() {
  SamplerConfig s;
  s.tessellation.sphere_rings = 12;
  s.tessellation.sphere_segments = 24;
  s.tessellation.round_segments = 24;
  s.tessellation.round_bands = 3;
  s.tessellation.cap_rings = 2;
  s.tessellation.torus_major = 24;
  s.tessellation.torus_minor = 12;
  return s;
}

}  // namespace

TEST_CASE("mixing frequencies") {
  AugmentConfig cfg;
  Rng rng(17);
  std::array<int, 3> hist{};
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++hist[size_t(choose_augmentation(rng, cfg))];
  CHECK(std::abs(hist[size_t(AugKind::boolean)] / double(n) - 0.4) <= 0.01);
  CHECK(std::abs(hist[size_t(AugKind::wireframe)] / double(n) - 0.2) <= 0.01);
  CHECK(std::abs(hist[size_t(AugKind::none)] / double(n) - 0.4) <= 0.01);

  AugmentConfig only_none;
  only_none.p_boolean = 0;
  only_none.p_wireframe = 0;
  only_none.p_none = 1;
  for (int i = 0; i < 1000; ++i) CHECK(choose_augmentation(rng, only_none) == AugKind::none);
}

TEST_CASE("augment config validation") {
  AugmentConfig c;
  CHECK_NOTHROW(c.validate());
  c.p_none = 0.5;
  try {
    c.validate();
    FAIL("expected invalid-config");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_config);
  }
  AugmentConfig t;
  t.cutter_pool.push_back(PrimitiveKind::torus);
  CHECK_THROWS_AS(t.validate(), Error);
  AugmentConfig near;
  near.p_none = 0.4 + 5e-10;
  CHECK_NOTHROW(near.validate());
}

TEST_CASE("augmentation records are consistent") {
  SamplerConfig sc = light_sampler();
  AugmentConfig ac;
  std::array<int, 5> cutter_kinds{};
  int booleans = 0, fallbacks = 0;
  for (uint64_t seed = 0; seed < 150; ++seed) {
    Rng rng(seed);
    ComposedObject obj = compose(rng, sc);
    const std::vector<Vec3> before = obj.mesh.positions;
    const int32_t groups = obj.surface_count();
    augment_object(rng, obj, ac);
    const AugRecord& a = obj.augmentation;

    CHECK((a.kind == AugKind::boolean) == a.cutter.has_value());
    CHECK((a.kind == AugKind::wireframe) == a.wire_thickness.has_value());
    CHECK_FALSE((a.cutter.has_value() && a.wire_thickness.has_value()));
    CHECK((a.kind == a.drawn || (a.boolean_fallback && a.drawn == AugKind::boolean)));
    for (int32_t g : a.heightfield_surfaces) CHECK((g >= 0 && g < groups));

    // no augmentation introduces new surface groups
    for (int32_t g : obj.mesh.groups) CHECK((g >= 0 && g < groups));
    CHECK(obj.surface_count() == groups);

    if (a.cutter) {
      ++booleans;
      ++cutter_kinds[size_t(a.cutter->kind)];
      Vec3 c = a.cutter->transform.translation;
      bool on_vertex = std::find_if(before.begin(), before.end(), [&](const Vec3& p) {
                         return p.x == c.x && p.y == c.y && p.z == c.z;
                       }) != before.end();
      CHECK(on_vertex);
      CHECK(a.solidify_thickness.has_value());
    }
    if (a.boolean_fallback) ++fallbacks;
    if (a.kind != AugKind::wireframe) CHECK(is_watertight(obj.mesh));
  }
  CHECK(cutter_kinds[size_t(PrimitiveKind::torus)] == 0);
  CHECK(booleans > 30);
  MESSAGE("boolean fallbacks: " << fallbacks);
}

TEST_CASE("wireframe output is a closed beam set") {
  SamplerConfig sc = light_sampler();
  AugmentConfig ac;
  ac.p_boolean = 0;
  ac.p_wireframe = 1;
  ac.p_none = 0;
  for (uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    ComposedObject obj = compose(rng, sc);
    augment_object(rng, obj, ac);
    CHECK(obj.augmentation.kind == AugKind::wireframe);
    CHECK(is_closed_manifold(obj.mesh));
  }
}

TEST_CASE("augmentation is deterministic") {
  SamplerConfig sc = light_sampler();
  AugmentConfig ac;
  for (uint64_t seed : {3ull, 4ull, 5ull, 6ull}) {
    Rng r1(seed), r2(seed);
    ComposedObject a = compose(r1, sc), b = compose(r2, sc);
    augment_object(r1, a, ac);
    augment_object(r2, b, ac);
    CHECK(a.augmentation.kind == b.augmentation.kind);
    CHECK(a.augmentation.heightfield_surfaces == b.augmentation.heightfield_surfaces);
    CHECK(a.mesh.triangles == b.mesh.triangles);
    CHECK(a.mesh.positions.size() == b.mesh.positions.size());
  }
}

TEST_CASE("height fields hit half of the surfaces") {
  SamplerConfig sc;
  sc.tessellation.cube = 1;
  sc.tessellation.sphere_rings = 4;
  sc.tessellation.sphere_segments = 6;
  sc.tessellation.round_segments = 6;
  sc.tessellation.round_bands = 1;
  sc.tessellation.cap_rings = 1;
  sc.tessellation.torus_major = 6;
  sc.tessellation.torus_minor = 4;
  AugmentConfig ac;
  ac.p_boolean = 0;
  ac.p_wireframe = 0;
  ac.p_none = 1;
  size_t surfaces = 0, displaced = 0;
  for (uint64_t seed = 0; seed < 10000; ++seed) {
    Rng rng(seed);
    ComposedObject obj = compose(rng, sc);
    augment_object(rng, obj, ac);
    surfaces += size_t(obj.surface_count());
    displaced += obj.augmentation.heightfield_surfaces.size();
  }
  CHECK(std::abs(double(displaced) / double(surfaces) - 0.5) <= 0.02);
}

TEST_CASE("boolean-cut objects texture every group") {
  SamplerConfig sc = light_sampler();
  AugmentConfig ac;
  ac.p_boolean = 1;
  ac.p_wireframe = 0;
  ac.p_none = 0;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    ComposedObject obj = compose(rng, sc);
    augment_object(rng, obj, ac);
    assign_textures(rng, obj, 64);
    for (int32_t g : obj.mesh.groups) CHECK(size_t(g) < obj.textures.size());
  }
}
