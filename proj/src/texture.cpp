#include "primforge/texture.hpp"

#include <algorithm>
#include <cmath>

#include "primforge/error.hpp"
#include "primforge/image.hpp"

namespace pf {

std::string_view to_string(TextureFamily family) {
  switch (family) {
    case TextureFamily::checker: return "checker";
    case TextureFamily::value_noise: return "value-noise";
    case TextureFamily::gradient: return "gradient";
    case TextureFamily::voronoi: return "voronoi";
    case TextureFamily::image: return "image";
  }
  return "?";
}

bool valid_texture_res(int res) {
  return res >= 64 && res <= 1024 && (res & (res - 1)) == 0;
}

namespace {

Rgb8 random_color(Rng& rng) {
  return {uint8_t(rng.uniform_int(256)), uint8_t(rng.uniform_int(256)),
          uint8_t(rng.uniform_int(256))};
}

double luma(Rgb8 c) { return 0.2126 * c[0] + 0.7152 * c[1] + 0.0722 * c[2]; }

// Second color of a two-tone texture; at least 64 levels of luminance away
// from the first so no pattern comes out flat.
Rgb8 contrasting_color(Rng& rng, Rgb8 first) {
  for (int attempt = 0; attempt < 32; ++attempt) {
    Rgb8 c = random_color(rng);
    if (std::abs(luma(c) - luma(first)) >= 64) return c;
  }
  return luma(first) < 128 ? Rgb8{255, 255, 255} : Rgb8{0, 0, 0};
}

Rgb8 mix(Rgb8 a, Rgb8 b, double t) {
  t = std::clamp(t, 0.0, 1.0);
  Rgb8 out;
  for (int c = 0; c < 3; ++c) out[c] = uint8_t(std::lround(a[c] + (b[c] - a[c]) * t));
  return out;
}

// Periodic 2D gradient noise on a period x period lattice.
class GradientNoise {
 public:
  GradientNoise(uint64_t seed, int period) : period_(period), grads_(size_t(period) * period) {
    for (int y = 0; y < period; ++y)
      for (int x = 0; x < period; ++x) {
        double angle = double(hash64(seed, uint64_t(x), uint64_t(y)) >> 11) * 0x1.0p-53 * 2 * pi;
        grads_[size_t(y) * period + x] = {std::cos(angle), std::sin(angle)};
      }
  }

  double operator()(double x, double y) const {
    int x0 = int(std::floor(x)), y0 = int(std::floor(y));
    double fx = x - x0, fy = y - y0;
    double n00 = corner(x0, y0, fx, fy), n10 = corner(x0 + 1, y0, fx - 1, fy);
    double n01 = corner(x0, y0 + 1, fx, fy - 1), n11 = corner(x0 + 1, y0 + 1, fx - 1, fy - 1);
    double sx = fade(fx), sy = fade(fy);
    double a = n00 + (n10 - n00) * sx, b = n01 + (n11 - n01) * sx;
    return a + (b - a) * sy;
  }

 private:
  static double fade(double t) { return t * t * t * (t * (t * 6 - 15) + 10); }

  double corner(int ix, int iy, double dx, double dy) const {
    int wx = ((ix % period_) + period_) % period_, wy = ((iy % period_) + period_) % period_;
    const auto& g = grads_[size_t(wy) * period_ + wx];
    return g[0] * dx + g[1] * dy;
  }

  int period_;
  std::vector<std::array<double, 2>> grads_;
};

}  // namespace

Texture make_checker(int res, int cells, Rgb8 c0, Rgb8 c1) {
  if (!valid_texture_res(res)) throw Error(Errc::invalid_parameter, "bad texture resolution");
  if (cells < 1) throw Error(Errc::invalid_parameter, "checker needs >= 1 cell");
  Texture tex;
  tex.res = res;
  tex.family = TextureFamily::checker;
  tex.pixels.resize(size_t(res) * res);
  for (int j = 0; j < res; ++j)
    for (int i = 0; i < res; ++i) {
      int ci = i * cells / res, cj = j * cells / res;
      tex.pixels[size_t(j) * res + i] = ((ci + cj) % 2 == 0) ? c0 : c1;
    }
  return tex;
}

Texture gen_texture(Rng& rng, int res, TextureFamily family) {
  if (!valid_texture_res(res)) throw Error(Errc::invalid_parameter, "bad texture resolution");
  Texture tex;
  const uint64_t seed = rng.next_u64();
  Rng r(seed);
  switch (family) {
    case TextureFamily::checker: {
      int cells = 2 + int(r.uniform_int(15));
      Rgb8 c0 = random_color(r), c1 = contrasting_color(r, c0);
      tex = make_checker(res, cells, c0, c1);
      break;
    }
    case TextureFamily::value_noise: {
      tex.res = res;
      tex.pixels.resize(size_t(res) * res);
      int base = 2 + int(r.uniform_int(7));
      Rgb8 c0 = random_color(r), c1 = contrasting_color(r, c0);
      GradientNoise noise[4] = {{r.next_u64(), base}, {r.next_u64(), base * 2},
                                {r.next_u64(), base * 4}, {r.next_u64(), base * 8}};
      for (int j = 0; j < res; ++j)
        for (int i = 0; i < res; ++i) {
          double u = double(i) / res, v = double(j) / res, sum = 0, amp = 1;
          for (int o = 0; o < 4; ++o, amp *= 0.5) {
            double f = base << o;
            sum += amp * noise[o](u * f, v * f);
          }
          tex.pixels[size_t(j) * res + i] = mix(c0, c1, 0.5 + 0.75 * sum);
        }
      break;
    }
    case TextureFamily::gradient: {
      tex.res = res;
      tex.pixels.resize(size_t(res) * res);
      // stripes along an integer lattice direction so the ramp tiles
      int kx = int(r.uniform_int(7)) - 3, ky = 1 + int(r.uniform_int(3));
      if (r.bernoulli(0.5)) std::swap(kx, ky);
      Rgb8 c0 = random_color(r), c1 = contrasting_color(r, c0);
      for (int j = 0; j < res; ++j)
        for (int i = 0; i < res; ++i) {
          double s = kx * double(i) / res + ky * double(j) / res;
          double t = s - std::floor(s);
          tex.pixels[size_t(j) * res + i] = mix(c0, c1, 1 - std::abs(2 * t - 1));
        }
      break;
    }
    case TextureFamily::voronoi: {
      tex.res = res;
      tex.pixels.resize(size_t(res) * res);
      int sites = 8 + int(r.uniform_int(57));
      std::vector<std::array<double, 2>> pos(sites);
      std::vector<Rgb8> col(sites);
      for (int s = 0; s < sites; ++s) {
        pos[s] = {r.uniform(), r.uniform()};
        col[s] = random_color(r);
      }
      for (int j = 0; j < res; ++j)
        for (int i = 0; i < res; ++i) {
          double u = (i + 0.5) / res, v = (j + 0.5) / res, best = INFINITY;
          int nearest = 0;
          for (int s = 0; s < sites; ++s) {
            double dx = std::abs(u - pos[s][0]), dy = std::abs(v - pos[s][1]);
            dx = std::min(dx, 1 - dx);
            dy = std::min(dy, 1 - dy);
            double d = dx * dx + dy * dy;
            if (d < best) {
              best = d;
              nearest = s;
            }
          }
          tex.pixels[size_t(j) * res + i] = col[nearest];
        }
      break;
    }
    case TextureFamily::image:
      throw Error(Errc::invalid_parameter, "image textures come from a directory library");
  }
  tex.family = family;
  tex.seed = seed;
  return tex;
}

Rgb sample_texture(const Texture& tex, double u, double v) {
  const int n = tex.res;
  double x = (u - std::floor(u)) * n, y = (v - std::floor(v)) * n;
  int i0 = int(std::floor(x)), j0 = int(std::floor(y));
  double fx = x - i0, fy = y - j0;
  i0 %= n;
  j0 %= n;
  int i1 = (i0 + 1) % n, j1 = (j0 + 1) % n;
  const Rgb8 &a = tex.texel(i0, j0), &b = tex.texel(i1, j0);
  const Rgb8 &c = tex.texel(i0, j1), &d = tex.texel(i1, j1);
  Rgb out;
  for (int k = 0; k < 3; ++k) {
    double top = a[k] + (b[k] - a[k]) * fx;
    double bottom = c[k] + (d[k] - c[k]) * fx;
    out[k] = float((top + (bottom - top) * fy) / 255.0);
  }
  return out;
}

Texture library_texture(uint64_t library_seed, uint32_t id, int res) {
  Rng rng(hash64(library_seed, id));
  static constexpr TextureFamily families[4] = {TextureFamily::checker, TextureFamily::value_noise,
                                                TextureFamily::gradient, TextureFamily::voronoi};
  TextureFamily family = families[rng.uniform_int(4)];
  Texture tex = gen_texture(rng, res, family);
  tex.id = id;
  return tex;
}

TextureLibrary TextureLibrary::procedural(uint64_t seed, uint32_t count, int res) {
  if (count == 0) throw Error(Errc::invalid_config, "texture library is empty");
  if (!valid_texture_res(res)) throw Error(Errc::invalid_config, "bad texture resolution");
  TextureLibrary lib;
  lib.seed_ = seed;
  lib.count_ = count;
  lib.res_ = res;
  return lib;
}

TextureLibrary TextureLibrary::from_directory(const std::filesystem::path& dir, int res) {
  if (!valid_texture_res(res)) throw Error(Errc::invalid_config, "bad texture resolution");
  std::vector<std::filesystem::path> files;
  if (!std::filesystem::is_directory(dir))
    throw Error(Errc::io, "texture directory not found: " + dir.string());
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    auto ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    if (entry.is_regular_file() && ext == ".png") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error(Errc::invalid_config, "no PNG textures in " + dir.string());
  TextureLibrary lib;
  lib.count_ = uint32_t(files.size());
  lib.res_ = res;
  for (uint32_t id = 0; id < files.size(); ++id) {
    Image img = read_png(files[id], 3);
    auto tex = std::make_shared<Texture>();
    tex->id = id;
    tex->res = res;
    tex->family = TextureFamily::image;
    tex->seed = fnv1a64({reinterpret_cast<const unsigned char*>(img.data.data()), img.data.size()});
    tex->pixels.resize(size_t(res) * res);
    // nearest resample; image row 0 is the top, texture row 0 is v = 0
    for (int j = 0; j < res; ++j)
      for (int i = 0; i < res; ++i) {
        int sx = std::min(img.width - 1, int((i + 0.5) * img.width / res));
        int sy = std::min(img.height - 1, int((j + 0.5) * img.height / res));
        const uint8_t* p = img.pixel(sx, img.height - 1 - sy);
        tex->pixels[size_t(j) * res + i] = {p[0], p[1], p[2]};
      }
    lib.loaded_.push_back(std::move(tex));
  }
  return lib;
}

std::shared_ptr<const Texture> TextureLibrary::get(uint32_t id) const {
  if (id >= count_) throw Error(Errc::invalid_parameter, "texture id out of range");
  if (!loaded_.empty()) return loaded_[id];
  {
    std::lock_guard lock(cache_->mutex);
    auto it = cache_->items.find(id);
    if (it != cache_->items.end()) return it->second;
  }
  auto tex = std::make_shared<const Texture>(library_texture(seed_, id, res_));
  std::lock_guard lock(cache_->mutex);
  return cache_->items.try_emplace(id, std::move(tex)).first->second;
}

void assign_textures(Rng& rng, ComposedObject& obj, uint32_t library_size) {
  if (library_size == 0) throw Error(Errc::invalid_parameter, "texture library is empty");
  obj.textures.resize(size_t(obj.surface_count()));
  for (auto& t : obj.textures) t = uint32_t(rng.uniform_int(library_size));
}

}  // namespace pf
