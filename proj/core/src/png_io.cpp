#include "srdm/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>

namespace srdm {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void fail(const std::filesystem::path& path, const char* what) {
  throw std::runtime_error(std::string(what) + ": " + path.string());
}

}  // namespace

RgbBuffer read_png_rgb8(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.string().c_str(), "rb"));
  if (!fp) fail(path, "cannot open PNG");

  png_byte header[8];
  if (std::fread(header, 1, 8, fp.get()) != 8 || png_sig_cmp(header, 0, 8) != 0) {
    fail(path, "not a PNG file");
  }

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) fail(path, "png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    fail(path, "png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(path, "corrupt PNG");
  }
  png_init_io(png, fp.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  // Normalize everything to 8-bit RGB.
  png_set_palette_to_rgb(png);
  if (png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY &&
      png_get_bit_depth(png, info) < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (png_get_bit_depth(png, info) == 16) png_set_strip_16(png);
  if (png_get_color_type(png, info) & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY ||
      png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_gray_to_rgb(png);
  }
  png_read_update_info(png, info);

  RgbBuffer buf;
  buf.width = static_cast<int>(png_get_image_width(png, info));
  buf.height = static_cast<int>(png_get_image_height(png, info));
  if (png_get_rowbytes(png, info) != static_cast<size_t>(buf.width) * 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(path, "unexpected PNG row size after normalization");
  }
  buf.data.resize(static_cast<size_t>(buf.width) * buf.height * 3);
  std::vector<png_bytep> rows(static_cast<size_t>(buf.height));
  for (int y = 0; y < buf.height; ++y) {
    rows[static_cast<size_t>(y)] = buf.data.data() + static_cast<size_t>(y) * buf.width * 3;
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return buf;
}

void write_png_rgb8(const std::filesystem::path& path, const RgbBuffer& buf) {
  if (buf.width <= 0 || buf.height <= 0 ||
      buf.data.size() != static_cast<size_t>(buf.width) * buf.height * 3) {
    throw std::invalid_argument("write_png_rgb8: inconsistent buffer");
  }
  FilePtr fp(std::fopen(path.string().c_str(), "wb"));
  if (!fp) fail(path, "cannot create PNG");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) fail(path, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    fail(path, "png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail(path, "PNG write error");
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(buf.width),
               static_cast<png_uint_32>(buf.height), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(png, 4);
  png_write_info(png, info);
  std::vector<png_bytep> rows(static_cast<size_t>(buf.height));
  for (int y = 0; y < buf.height; ++y) {
    rows[static_cast<size_t>(y)] =
        const_cast<png_bytep>(buf.data.data() + static_cast<size_t>(y) * buf.width * 3);
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

ImageTensor to_image(const RgbBuffer& buf) {
  ImageTensor img(buf.width, buf.height);
  for (size_t i = 0; i < buf.data.size(); ++i) {
    img.data[i] = static_cast<float>(buf.data[i]) / 255.0f;
  }
  return img;
}

RgbBuffer to_rgb8(const ImageTensor& img) {
  RgbBuffer buf;
  buf.width = img.width;
  buf.height = img.height;
  buf.data.resize(img.data.size());
  for (size_t i = 0; i < img.data.size(); ++i) {
    buf.data[i] = static_cast<uint8_t>(
        std::clamp(std::lround(static_cast<double>(img.data[i]) * 255.0), 0l, 255l));
  }
  return buf;
}

ImageTensor read_png(const std::filesystem::path& path) { return to_image(read_png_rgb8(path)); }

void write_png(const std::filesystem::path& path, const ImageTensor& img) {
  write_png_rgb8(path, to_rgb8(img));
}

}  // namespace srdm
