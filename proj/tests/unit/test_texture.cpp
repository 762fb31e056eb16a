#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "primforge/error.hpp"
#include "primforge/image.hpp"
#include "primforge/sampler.hpp"
#include "primforge/texture.hpp"

using namespace pf;

namespace {

constexpr TextureFamily families[] = {TextureFamily::checker, TextureFamily::value_noise,
                                      TextureFamily::gradient, TextureFamily::voronoi};

double luminance_stddev(const Texture& t) {
  double s = 0, s2 = 0;
  for (const Rgb8& p : t.pixels) {
    double y = (0.2126 * p[0] + 0.7152 * p[1] + 0.0722 * p[2]) / 255.0;
    s += y;
    s2 += y * y;
  }
  double n = double(t.pixels.size());
  return std::sqrt(std::max(0.0, s2 / n - (s / n) * (s / n)));
}

}  // namespace

TEST_CASE("texture resolution rule") {
  CHECK(valid_texture_res(64));
  CHECK(valid_texture_res(1024));
  CHECK_FALSE(valid_texture_res(32));
  CHECK_FALSE(valid_texture_res(96));
  CHECK_FALSE(valid_texture_res(2048));
  Rng rng(1);
  CHECK_THROWS_AS(gen_texture(rng, 100, TextureFamily::checker), Error);
}

TEST_CASE("generation is deterministic per family") {
  for (TextureFamily f : families) {
    Rng a(77), b(77);
    Texture x = gen_texture(a, 64, f), y = gen_texture(b, 64, f);
    CHECK(x.pixels == y.pixels);
    CHECK(x.family == f);
    CHECK(x.res == 64);
    CHECK(x.pixels.size() == 64 * 64);
  }
}

TEST_CASE("checker example") {
  Texture t = make_checker(64, 2, {0, 0, 0}, {255, 255, 255});
  CHECK(t.texel(0, 0) != t.texel(32, 0));
  CHECK(t.texel(0, 0) == t.texel(32, 32));
}

TEST_CASE("value noise is not flat") {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    CHECK(luminance_stddev(gen_texture(rng, 128, TextureFamily::value_noise)) > 5.0 / 255);
  }
}

TEST_CASE("bilinear sampling") {
  Texture flat = make_checker(64, 2, {10, 20, 30}, {10, 20, 30});
  for (double u : {0.0, 0.13, 0.5, 0.99, 3.7, -2.2}) {
    Rgb c = sample_texture(flat, u, 0.4);
    CHECK(c[0] == doctest::Approx(10 / 255.0));
    CHECK(c[1] == doctest::Approx(20 / 255.0));
    CHECK(c[2] == doctest::Approx(30 / 255.0));
  }
  Rng rng(3);
  Texture t = gen_texture(rng, 64, TextureFamily::value_noise);
  Rgb c = sample_texture(t, 0.0, 0.0);
  for (int k = 0; k < 3; ++k) CHECK(c[size_t(k)] == doctest::Approx(t.texel(0, 0)[size_t(k)] / 255.0));
  Rgb d = sample_texture(t, 5.0 / 64, 9.0 / 64);
  for (int k = 0; k < 3; ++k) CHECK(d[size_t(k)] == doctest::Approx(t.texel(5, 9)[size_t(k)] / 255.0));
  Rgb w1 = sample_texture(t, 1.25, 0.5), w2 = sample_texture(t, 0.25, 0.5);
  for (int k = 0; k < 3; ++k) CHECK(w1[size_t(k)] == doctest::Approx(w2[size_t(k)]).epsilon(1e-12));
  Rgb w3 = sample_texture(t, -0.75, 0.5);
  for (int k = 0; k < 3; ++k) CHECK(w3[size_t(k)] == doctest::Approx(w2[size_t(k)]).epsilon(1e-12));
}

TEST_CASE("procedural library") {
  TextureLibrary lib = TextureLibrary::procedural(5, 16, 64);
  CHECK(lib.size() == 16);
  auto a = lib.get(3);
  CHECK(a == lib.get(3));  // cached
  CHECK(a->pixels == library_texture(5, 3, 64).pixels);
  CHECK(a->pixels != lib.get(4)->pixels);
  CHECK_THROWS_AS(lib.get(16), Error);
}

TEST_CASE("directory library") {
  test::TempDir dir("texdir");
  Image img(32, 32, 3);
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 32; ++x) {
      img.pixel(x, y)[0] = uint8_t(x * 8);
      img.pixel(x, y)[1] = 100;
      img.pixel(x, y)[2] = uint8_t(y * 8);
    }
  write_png(dir.path / "b.png", img);
  write_png(dir.path / "a.png", img);
  TextureLibrary lib = TextureLibrary::from_directory(dir.path, 64);
  CHECK(lib.size() == 2);
  CHECK(lib.get(0)->res == 64);
  CHECK(lib.get(0)->family == TextureFamily::image);
  test::TempDir empty("texempty");
  CHECK_THROWS_AS(TextureLibrary::from_directory(empty.path, 64), Error);
}

TEST_CASE("assignment covers every group and is deterministic") {
  SamplerConfig sc;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    Rng r1(seed), r2(seed);
    ComposedObject a = compose(r1, sc), b = compose(r2, sc);
    assign_textures(r1, a, 256);
    assign_textures(r2, b, 256);
    CHECK(a.textures == b.textures);
    CHECK(int32_t(a.textures.size()) == a.surface_count());
    for (uint32_t id : a.textures) CHECK(id < 256);
  }
}

TEST_CASE("assignments of two surfaces are uncorrelated") {
  ComposedObject obj;
  obj.instances.resize(1);
  obj.instances[0].kind = PrimitiveKind::cone;  // two surface groups
  REQUIRE(obj.surface_count() == 2);
  const int n = 10000;
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    Rng rng(hash64(99, uint64_t(i)));
    assign_textures(rng, obj, 256);
    double x = obj.textures[0], y = obj.textures[1];
    sx += x;
    sy += y;
    sxx += x * x;
    syy += y * y;
    sxy += x * y;
  }
  double cov = sxy / n - (sx / n) * (sy / n);
  double r = cov / std::sqrt((sxx / n - sx * sx / n / n) * (syy / n - sy * sy / n / n));
  CHECK(std::abs(r) < 0.05);
}
