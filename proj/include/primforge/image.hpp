#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace pf {

/// 8-bit interleaved image, rows top to bottom.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 4;
  std::vector<uint8_t> data;

  Image() = default;
  Image(int w, int h, int c) : width(w), height(h), channels(c), data(size_t(w) * h * c, 0) {}

  uint8_t* pixel(int x, int y) { return data.data() + (size_t(y) * width + x) * channels; }
  const uint8_t* pixel(int x, int y) const {
    return data.data() + (size_t(y) * width + x) * channels;
  }
};

// channels must be 3 (RGB) or 4 (RGBA). `level` is the zlib level (0-9);
// the bytes are a pure function of the pixels and the level.
std::string encode_png(const Image& image, int level = 6);
void write_png(const std::filesystem::path& path, const Image& image, int level = 6);

// Decodes any PNG, converted to the requested channel count (3 or 4).
Image read_png(const std::filesystem::path& path, int channels);

// 2x2 box filter; width and height must be even.
Image downsample_2x(const Image& image);

}  // namespace pf
