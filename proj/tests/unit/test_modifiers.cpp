#include <doctest.h>

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "primforge/error.hpp"
#include "primforge/mesh.hpp"
#include "primforge/modifiers.hpp"
#include "primforge/primitives.hpp"

using namespace pf;

namespace {

TriMesh unit_square() {
  TriMesh m;
  m.positions = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  m.add_triangle({0, 1, 2}, {Vec2{0, 0}, Vec2{1, 0}, Vec2{1, 1}}, 0);
  m.add_triangle({0, 2, 3}, {Vec2{0, 0}, Vec2{1, 1}, Vec2{0, 1}}, 0);
  return m;
}

size_t unique_edges(const TriMesh& m) {
  std::set<std::pair<uint32_t, uint32_t>> e;
  for (const Tri& t : m.triangles)
    for (int k = 0; k < 3; ++k) e.insert(std::minmax(t[size_t(k)], t[size_t((k + 1) % 3)]));
  return e.size();
}

}  // namespace

TEST_CASE("solidify a flat patch") {
  for (double t : {0.01, 0.05, 0.2}) {
    TriMesh s = solidify(unit_square(), t);
    CHECK(is_closed_manifold(s));
    CHECK(std::abs(signed_volume(s)) == doctest::Approx(t).epsilon(0.05));
  }
  CHECK_THROWS_AS(solidify(unit_square(), 0.0), Error);
  CHECK_THROWS_AS(solidify(unit_square(), -0.1), Error);
  CHECK_THROWS_AS(solidify(unit_square(), weld_tolerance / 10), Error);
}

TEST_CASE("solidify closed meshes") {
  TriMesh s = solidify(gen_sphere(12, 24), 0.05);
  CHECK(is_closed_manifold(s));
  double outer = signed_volume(gen_sphere(12, 24));
  CHECK(signed_volume(s) > 0);
  CHECK(signed_volume(s) < outer);
  CHECK(is_closed_manifold(solidify(gen_cube(3), 0.1)));
}

TEST_CASE("wireframe of one triangle") {
  TriMesh tri;
  tri.positions = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  tri.add_triangle({0, 1, 2}, {Vec2{0, 0}, Vec2{1, 0}, Vec2{0, 1}}, 0);
  TriMesh w = wireframe(tri, 0.02, 0);
  CHECK(w.triangle_count() == 36);
  CHECK(is_closed_manifold(w));
  CHECK_THROWS_AS(wireframe(tri, 0.0, 0), Error);
  CHECK_THROWS_AS(wireframe(tri, 0.02, -1), Error);
}

TEST_CASE("wireframe beam volume on a cube") {
  TriMesh cube = gen_cube(1);
  double t = 0.01;
  double expect = 0;
  std::set<std::pair<uint32_t, uint32_t>> seen;
  for (const Tri& tr : cube.triangles)
    for (int k = 0; k < 3; ++k) {
      auto e = std::minmax(tr[size_t(k)], tr[size_t((k + 1) % 3)]);
      if (seen.insert(e).second) expect += length(cube.positions[e.first] - cube.positions[e.second]) * t * t;
    }
  TriMesh w = wireframe(cube, t, 0);
  CHECK(w.triangle_count() == 12 * seen.size());
  CHECK(signed_volume(w) == doctest::Approx(expect).epsilon(0.10));
  CHECK(is_closed_manifold(w));
  // groups come from the input
  for (int32_t g : w.groups) CHECK((g >= 0 && g < 6));
}

TEST_CASE("midpoint subdivision") {
  TriMesh c = gen_cube(1);
  TriMesh s1 = subdivide_midpoint(c, 1);
  CHECK(s1.triangle_count() == 4 * c.triangle_count());
  CHECK(subdivide_midpoint(c, 2).triangle_count() == 16 * c.triangle_count());
  CHECK(is_closed_manifold(s1));
  CHECK(signed_volume(s1) == doctest::Approx(1.0).epsilon(1e-12));
  TriMesh w = wireframe(c, 0.01, 1);
  CHECK(w.triangle_count() == 12 * unique_edges(s1));
}
