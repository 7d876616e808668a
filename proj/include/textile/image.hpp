#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "textile/errors.hpp"

namespace textile {

// 8-bit grayscale raster, row-major.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> data;

  GrayImage() = default;
  GrayImage(int w, int h, uint8_t fill = 0);

  uint8_t at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
  uint8_t& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
  size_t pixel_count() const { return static_cast<size_t>(width) * height; }
  bool empty() const { return width == 0 || height == 0; }

  bool operator==(const GrayImage&) const = default;
};

// Row-major bitmap with values restricted to {0, 1}.
struct BinaryImage {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> data;

  BinaryImage() = default;
  BinaryImage(int w, int h, uint8_t fill = 0);

  uint8_t at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
  uint8_t& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
  size_t pixel_count() const { return static_cast<size_t>(width) * height; }
  bool empty() const { return width == 0 || height == 0; }
  size_t ones() const;

  bool operator==(const BinaryImage&) const = default;
};

// 24-bit color raster, 3 bytes per pixel (R, G, B), row-major.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> data;

  RgbImage() = default;
  RgbImage(int w, int h);

  const uint8_t* at(int x, int y) const {
    return data.data() + 3 * (static_cast<size_t>(y) * width + x);
  }
  uint8_t* at(int x, int y) { return data.data() + 3 * (static_cast<size_t>(y) * width + x); }
  bool empty() const { return width == 0 || height == 0; }
};

// Luma coefficients for color-to-gray conversion. Defaults are BT.601.
struct LumaWeights {
  double r = 0.299;
  double g = 0.587;
  double b = 0.114;
};

// Per-pixel weighted luma, rounded to the nearest integer in [0, 255].
// Throws std::invalid_argument on an empty image.
GrayImage to_grayscale(const RgbImage& image, const LumaWeights& luma = {});

// Binary netpbm I/O (PGM `P5`, PPM `P6`), maxval <= 255 only.
GrayImage read_pgm(const std::filesystem::path& path);
RgbImage read_ppm(const std::filesystem::path& path);
void write_pgm(const GrayImage& image, const std::filesystem::path& path);

// Writes a binary image as a PGM with 1-pixels at 255, for inspection dumps.
void write_pgm(const BinaryImage& image, const std::filesystem::path& path);

// Reads either format, converting color input with the given luma weights.
GrayImage load_gray(const std::filesystem::path& path, const LumaWeights& luma = {});

}  // namespace textile
