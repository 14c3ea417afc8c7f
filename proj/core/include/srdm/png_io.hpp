#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "srdm/image.hpp"

namespace srdm {

/// Decode a PNG into 8-bit interleaved RGB. Grayscale, palette and alpha
/// inputs are expanded/stripped. Throws std::runtime_error on broken files.
struct RgbBuffer {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> data;  // h*w*3
};

RgbBuffer read_png_rgb8(const std::filesystem::path& path);
void write_png_rgb8(const std::filesystem::path& path, const RgbBuffer& buf);

ImageTensor to_image(const RgbBuffer& buf);
RgbBuffer to_rgb8(const ImageTensor& img);

ImageTensor read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const ImageTensor& img);

}  // namespace srdm
