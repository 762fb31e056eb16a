#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "primforge/csg.hpp"
#include "primforge/error.hpp"
#include "primforge/mesh.hpp"
#include "primforge/primitives.hpp"
#include "primforge/rng.hpp"

using namespace pf;
using pf::test::box;

namespace {

double overlap_1d(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

}  // namespace

TEST_CASE("box minus corner box") {
  TriMesh target = box({0, 0, 0}, {1, 1, 1});
  TriMesh cutter = box({0.5, 0.5, 0.5}, {1.5, 1.5, 1.5});
  TriMesh r = boolean_difference(target, cutter);
  CHECK(std::abs(signed_volume(r) - 0.875) <= 1e-3);
  CHECK(is_watertight(r));
  CHECK(euler_characteristic(r) == 2);
  for (int32_t g : r.groups) CHECK((g >= 0 && g < 6));
}

TEST_CASE("disjoint cutter leaves the target alone") {
  TriMesh target = gen_sphere(8, 16);
  TriMesh cutter = box({3, 3, 3}, {4, 4, 4});
  TriMesh r = boolean_difference(target, cutter);
  CHECK(std::abs(signed_volume(r) - signed_volume(target)) <= 1e-9);
  CHECK(r.triangle_count() == target.triangle_count());
}

TEST_CASE("enclosing cutter removes everything") {
  TriMesh target = box({0, 0, 0}, {1, 1, 1});
  TriMesh cutter = box({-1, -1, -1}, {2, 2, 2});
  CHECK(boolean_difference(target, cutter).triangle_count() == 0);
}

TEST_CASE("open inputs are rejected") {
  TriMesh open = gen_cube(1);
  open.triangles.pop_back();
  open.uvs.pop_back();
  open.groups.pop_back();
  try {
    (void)boolean_difference(open, box({0.2, 0.2, 0.2}, {2, 2, 2}));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_input);
  }
  CHECK_THROWS_AS(boolean_difference(gen_cube(1), open), Error);
}

TEST_CASE("random axis-aligned box pairs match analytic volumes") {
  Rng rng(2718);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Vec3 lo{rng.uniform(-1, 0), rng.uniform(-1, 0), rng.uniform(-1, 0)};
    Vec3 hi = lo + Vec3{rng.uniform(0.3, 1.5), rng.uniform(0.3, 1.5), rng.uniform(0.3, 1.5)};
    Vec3 clo{rng.uniform(-1.5, 0.8), rng.uniform(-1.5, 0.8), rng.uniform(-1.5, 0.8)};
    Vec3 chi = clo + Vec3{rng.uniform(0.2, 1.5), rng.uniform(0.2, 1.5), rng.uniform(0.2, 1.5)};
    int tess = 1 + int(rng.uniform_int(2));
    TriMesh r = boolean_difference(box(lo, hi, tess), box(clo, chi));
    double vt = (hi.x - lo.x) * (hi.y - lo.y) * (hi.z - lo.z);
    double vi = overlap_1d(lo.x, hi.x, clo.x, chi.x) * overlap_1d(lo.y, hi.y, clo.y, chi.y) *
                overlap_1d(lo.z, hi.z, clo.z, chi.z);
    double expect = vt - vi;
    double tol = std::max(1e-3, 1e-3 * vt);
    CHECK_MESSAGE(std::abs(signed_volume(r) - expect) <= tol, "trial " << trial);
    if (!r.empty()) {
      CHECK(is_watertight(r));
      for (int32_t g : r.groups) CHECK((g >= 0 && g < 6));
    }
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("curved cutters give plausible volumes") {
  TriMesh target = box({-1, -1, -1}, {1, 1, 1}, 2);
  Transform t;
  t.scale = {0.5, 0.5, 0.5};
  t.translation = {1, 1, 1};
  TriMesh ball = apply_transform(gen_sphere(24, 48), t);
  TriMesh r = boolean_difference(target, ball);
  // an octant of the ball is inside the box
  double expect = 8 - signed_volume(ball) / 8;
  CHECK(signed_volume(r) == doctest::Approx(expect).epsilon(1e-3));
  CHECK(is_watertight(r));
}

TEST_CASE("overlapping shells are cut one by one") {
  std::vector<TriMesh> parts{box({0, 0, 0}, {1, 1, 1}), box({0.5, 0.2, 0.2}, {1.5, 0.8, 0.8})};
  TriMesh target = merge(parts);
  TriMesh cutter = box({0.8, -1, -1}, {3, 3, 3});
  TriMesh r = boolean_difference(target, cutter);
  // each shell is clipped at x = 0.8 independently
  double expect = 0.8 + 0.3 * 0.6 * 0.6;
  CHECK(signed_volume(r) == doctest::Approx(expect).epsilon(1e-6));
  CHECK(r.group_count() <= 12);
}

TEST_CASE("cut is deterministic") {
  TriMesh target = gen_torus(24, 12, 1, 0.35);
  TriMesh cutter = box({0.5, -1, -1}, {2, 1, 1});
  TriMesh a = boolean_difference(target, cutter);
  TriMesh b = boolean_difference(target, cutter);
  CHECK(a.triangles == b.triangles);
  REQUIRE(a.positions.size() == b.positions.size());
  for (size_t i = 0; i < a.positions.size(); ++i) CHECK(a.positions[i].x == b.positions[i].x);
}
