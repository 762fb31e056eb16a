#include "primforge/image.hpp"

#include <png.h>

#include <csetjmp>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "primforge/error.hpp"

namespace pf {

namespace {

void append_bytes(png_structp png, png_bytep data, png_size_t n) {
  auto* out = static_cast<std::string*>(png_get_io_ptr(png));
  out->append(reinterpret_cast<const char*>(data), n);
}

void no_flush(png_structp) {}

[[noreturn]] void on_png_error(png_structp png, png_const_charp msg) {
  *static_cast<std::string*>(png_get_error_ptr(png)) = msg;
  png_longjmp(png, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

}  // namespace

std::string encode_png(const Image& image, int level) {
  if (image.channels != 3 && image.channels != 4)
    throw Error(Errc::invalid_parameter, "png output needs 3 or 4 channels");
  if (image.width <= 0 || image.height <= 0) throw Error(Errc::invalid_parameter, "empty image");
  std::string out;
  std::string err;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &err, on_png_error, on_png_warning);
  if (!png) throw Error(Errc::io, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  std::vector<png_bytep> rows(size_t(image.height));
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(Errc::io, "png encode failed: " + err);
  }
  png_set_write_fn(png, &out, append_bytes, no_flush);
  png_set_compression_level(png, level);
  png_set_filter(png, 0, PNG_FILTER_SUB);
  png_set_IHDR(png, info, png_uint_32(image.width), png_uint_32(image.height), 8,
               image.channels == 4 ? PNG_COLOR_TYPE_RGBA : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  for (int y = 0; y < image.height; ++y)
    rows[size_t(y)] = const_cast<png_bytep>(image.pixel(0, y));
  png_set_rows(png, info, rows.data());
  png_write_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

void write_png(const std::filesystem::path& path, const Image& image, int level) {
  std::string bytes = encode_png(image, level);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f.write(bytes.data(), std::streamsize(bytes.size()));
  f.close();
  if (!f) throw Error(Errc::io, "cannot write " + path.string());
}

Image read_png(const std::filesystem::path& path, int channels) {
  if (channels != 3 && channels != 4)
    throw Error(Errc::invalid_parameter, "png input needs 3 or 4 channels");
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str()))
    throw Error(Errc::io, "cannot read " + path.string() + ": " + png.message);
  png.format = channels == 4 ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB;
  Image out(int(png.width), int(png.height), channels);
  if (!png_image_finish_read(&png, nullptr, out.data.data(), 0, nullptr)) {
    std::string msg = png.message;
    png_image_free(&png);
    throw Error(Errc::io, "cannot decode " + path.string() + ": " + msg);
  }
  return out;
}

Image downsample_2x(const Image& image) {
  if (image.width % 2 || image.height % 2)
    throw Error(Errc::invalid_parameter, "downsample needs even dimensions");
  Image out(image.width / 2, image.height / 2, image.channels);
  for (int y = 0; y < out.height; ++y)
    for (int x = 0; x < out.width; ++x)
      for (int c = 0; c < image.channels; ++c) {
        int sum = image.pixel(2 * x, 2 * y)[c] + image.pixel(2 * x + 1, 2 * y)[c] +
                  image.pixel(2 * x, 2 * y + 1)[c] + image.pixel(2 * x + 1, 2 * y + 1)[c];
        out.pixel(x, y)[c] = uint8_t((sum + 2) / 4);
      }
  return out;
}

}  // namespace pf
