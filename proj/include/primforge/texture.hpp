#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "primforge/object.hpp"
#include "primforge/rng.hpp"

namespace pf {

enum class TextureFamily : uint8_t { checker, value_noise, gradient, voronoi, image };

std::string_view to_string(TextureFamily family);

using Rgb8 = std::array<uint8_t, 3>;
using Rgb = std::array<float, 3>;  // [0, 1]

/// Square RGB texture. Texel (i, j) sits at u = i / res, v = j / res and
/// addressing wraps.
struct Texture {
  uint32_t id = 0;
  int res = 0;
  TextureFamily family = TextureFamily::checker;
  uint64_t seed = 0;
  std::vector<Rgb8> pixels;  // row j = v, column i = u

  const Rgb8& texel(int i, int j) const { return pixels[size_t(j) * res + i]; }
};

bool valid_texture_res(int res);

Texture gen_texture(Rng& rng, int res, TextureFamily family);

// Checker with an explicit cell count and two colors.
Texture make_checker(int res, int cells, Rgb8 c0, Rgb8 c1);

// Bilinear filtered lookup with wrap addressing.
Rgb sample_texture(const Texture& tex, double u, double v);

/// Source of textures by id. Procedural libraries build textures lazily from
/// (seed, id); directory libraries hold decoded PNGs. Both are safe to share
/// between threads.
class TextureLibrary {
 public:
  static TextureLibrary procedural(uint64_t seed, uint32_t count, int res);
  // Loads every *.png in `dir` (sorted by file name), resampled to `res`.
  static TextureLibrary from_directory(const std::filesystem::path& dir, int res);

  uint32_t size() const { return count_; }
  std::shared_ptr<const Texture> get(uint32_t id) const;

 private:
  uint64_t seed_ = 0;
  uint32_t count_ = 0;
  int res_ = 0;
  std::vector<std::shared_ptr<const Texture>> loaded_;
  struct Cache {
    std::mutex mutex;
    std::unordered_map<uint32_t, std::shared_ptr<const Texture>> items;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

// The procedural library's texture for `id`.
Texture library_texture(uint64_t library_seed, uint32_t id, int res);

// Draws an independent texture id per surface group.
void assign_textures(Rng& rng, ComposedObject& obj, uint32_t library_size);

}  // namespace pf
