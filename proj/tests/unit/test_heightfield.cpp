#include <doctest.h>

#include <cmath>

#include "primforge/error.hpp"
#include "primforge/heightfield.hpp"
#include "primforge/mesh.hpp"
#include "primforge/primitives.hpp"
#include "primforge/rng.hpp"

using namespace pf;

namespace {

HeightField from_function(int rows, int cols, double amp, double (*f)(double, double)) {
  HeightField hf;
  hf.rows = rows;
  hf.cols = cols;
  hf.amp_max = amp;
  hf.grid.resize(size_t(rows) * cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) hf.grid[size_t(r) * cols + c] = f(double(c) / (cols - 1), double(r) / (rows - 1));
  return hf;
}

double cubic_u(double u, double) { return 0.3 - 1.1 * u + 2.0 * u * u - 1.7 * u * u * u; }
double cubic_uv(double u, double v) {
  double p = 0.5 + u - 3 * u * u + 2.5 * u * u * u;
  double q = -0.2 + 0.4 * v + 1.5 * v * v - v * v * v;
  return p * q + 0.25 * v * v * v - u * v;
}

}  // namespace

TEST_CASE("make_heightfield bounds and determinism") {
  Rng rng(1);
  HeightField hf = make_heightfield(rng, 8, 8, 2.0, 0.15);
  CHECK(hf.amp_max == doctest::Approx(0.3));
  for (double g : hf.grid) CHECK(std::abs(g) <= 0.3);
  Rng a(5), b(5);
  CHECK(make_heightfield(a, 6, 7, 1.0, 0.15).grid == make_heightfield(b, 6, 7, 1.0, 0.15).grid);
  Rng z(3);
  for (double g : make_heightfield(z, 8, 8, 1.0, 0.0).grid) CHECK(g == 0.0);
  CHECK_THROWS_AS(make_heightfield(rng, 3, 8, 1.0, 0.15), Error);
  CHECK_THROWS_AS(make_heightfield(rng, 8, 3, 1.0, 0.15), Error);
}

TEST_CASE("bicubic interpolates nodes and constants") {
  Rng rng(9);
  HeightField hf = make_heightfield(rng, 8, 8, 1.0, 0.15);
  for (int r = 0; r < hf.rows; ++r)
    for (int c = 0; c < hf.cols; ++c)
      CHECK(std::abs(eval_bicubic(hf, double(c) / (hf.cols - 1), double(r) / (hf.rows - 1)) - hf.at(r, c)) <= 1e-9);
  HeightField k = from_function(8, 8, 1.0, [](double, double) { return 0.123; });
  for (int i = 0; i <= 50; ++i)
    for (int j = 0; j <= 50; ++j) CHECK(eval_bicubic(k, i / 50.0, j / 50.0) == doctest::Approx(0.123).epsilon(1e-12));
}

TEST_CASE("bicubic reproduces cubic polynomials") {
  for (auto f : {cubic_u, cubic_uv}) {
    for (int n : {5, 8, 13}) {
      HeightField hf = from_function(n, n, 10.0, f);
      double worst = 0;
      for (int i = 0; i <= 97; ++i)
        for (int j = 0; j <= 97; ++j) {
          double u = i / 97.0, v = j / 97.0;
          worst = std::max(worst, std::abs(eval_bicubic(hf, u, v) - f(u, v)));
        }
      CHECK(worst <= 1e-6);
    }
  }
}

TEST_CASE("uv outside the chart is clamped") {
  Rng rng(2);
  HeightField hf = make_heightfield(rng, 8, 8, 1.0, 0.15);
  CHECK(eval_bicubic(hf, -0.5, 0.3) == eval_bicubic(hf, 0.0, 0.3));
  CHECK(eval_bicubic(hf, 0.4, 1.7) == eval_bicubic(hf, 0.4, 1.0));
}

TEST_CASE("soft cap") {
  for (double x : {-0.3, -0.1, 0.0, 0.05, 0.3}) CHECK(soft_cap(x, 0.3) == x);
  double prev = soft_cap(0.3, 0.3);
  for (double x = 0.31; x < 10; x += 0.01) {
    double y = soft_cap(x, 0.3);
    CHECK(y <= 1.25 * 0.3);
    CHECK(y >= prev);
    CHECK(soft_cap(-x, 0.3) == -y);
    prev = y;
  }
  // C1 at the knee
  double h = 1e-7;
  CHECK((soft_cap(0.3 + h, 0.3) - soft_cap(0.3, 0.3)) / h == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("displacement stays under 1.25 amp_max") {
  Rng rng(123);
  for (int trial = 0; trial < 100; ++trial) {
    HeightField hf = make_heightfield(rng, 8, 8, rng.uniform(0.1, 3.0), 0.15);
    double worst = 0;
    for (int i = 0; i <= 200; ++i)
      for (int j = 0; j <= 200; ++j) worst = std::max(worst, std::abs(displacement_at(hf, i / 200.0, j / 200.0)));
    CHECK(worst <= 1.25 * hf.amp_max);
  }
  // adversarial alternating grid, where the raw interpolant overshoots
  HeightField alt = from_function(8, 8, 1.0, [](double u, double v) {
    return (int(std::lround(u * 7)) + int(std::lround(v * 7))) % 2 ? 1.0 : -1.0;
  });
  double worst = 0;
  for (int i = 0; i <= 300; ++i)
    for (int j = 0; j <= 300; ++j) worst = std::max(worst, std::abs(displacement_at(alt, i / 300.0, j / 300.0)));
  CHECK(worst <= 1.25);
}

TEST_CASE("displace_surface") {
  TriMesh cube = gen_cube(4);
  compute_normals(cube);
  HeightField zero;
  zero.rows = zero.cols = 8;
  zero.grid.assign(64, 0.0);
  TriMesh same = displace_surface(cube, 2, zero);
  REQUIRE(same.positions.size() == cube.positions.size());
  for (size_t i = 0; i < cube.positions.size(); ++i) {
    CHECK(same.positions[i].x == cube.positions[i].x);
    CHECK(same.positions[i].y == cube.positions[i].y);
    CHECK(same.positions[i].z == cube.positions[i].z);
  }

  Rng rng(4);
  HeightField hf = make_heightfield(rng, 8, 8, surface_extent(cube, 2), 0.15);
  TriMesh moved = displace_surface(cube, 2, hf);
  auto owners = vertex_owners(cube);
  for (size_t i = 0; i < cube.positions.size(); ++i) {
    double d = length(moved.positions[i] - cube.positions[i]);
    if (owners[i].group != 2) {
      CHECK(d == 0.0);
    } else {
      CHECK(d <= 1.25 * hf.amp_max + 1e-12);
    }
  }
  CHECK(is_closed_manifold(moved));
  CHECK_THROWS_AS(displace_surface(cube, 6, hf), Error);
  CHECK_THROWS_AS(displace_surface(cube, -1, hf), Error);
}

TEST_CASE("surface extent of a cube face") {
  CHECK(surface_extent(gen_cube(2), 0) == doctest::Approx(1.0));
}
