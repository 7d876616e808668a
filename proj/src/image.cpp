#include "textile/image.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <string>

namespace textile {

GrayImage::GrayImage(int w, int h, uint8_t fill)
    : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {
  if (w < 0 || h < 0) throw std::invalid_argument("GrayImage: negative dimensions");
}

BinaryImage::BinaryImage(int w, int h, uint8_t fill)
    : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {
  if (w < 0 || h < 0) throw std::invalid_argument("BinaryImage: negative dimensions");
  if (fill > 1) throw std::invalid_argument("BinaryImage: fill must be 0 or 1");
}

size_t BinaryImage::ones() const {
  return std::accumulate(data.begin(), data.end(), size_t{0});
}

RgbImage::RgbImage(int w, int h) : width(w), height(h), data(static_cast<size_t>(w) * h * 3, 0) {
  if (w < 0 || h < 0) throw std::invalid_argument("RgbImage: negative dimensions");
}

GrayImage to_grayscale(const RgbImage& image, const LumaWeights& luma) {
  if (image.empty()) throw std::invalid_argument("to_grayscale: empty image");
  GrayImage out(image.width, image.height);
  const uint8_t* src = image.data.data();
  for (size_t i = 0, n = out.pixel_count(); i < n; ++i, src += 3) {
    double v = luma.r * src[0] + luma.g * src[1] + luma.b * src[2];
    long rounded = std::lround(v);
    if (rounded < 0) rounded = 0;
    if (rounded > 255) rounded = 255;
    out.data[i] = static_cast<uint8_t>(rounded);
  }
  return out;
}

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
  throw IoError(path.string() + ": " + what);
}

// Reads one whitespace-delimited token, skipping '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

struct PnmHeader {
  std::string magic;
  int width = 0;
  int height = 0;
  int maxval = 0;
};

PnmHeader read_header(std::istream& in, const std::filesystem::path& path) {
  PnmHeader h;
  h.magic = next_token(in);
  try {
    h.width = std::stoi(next_token(in));
    h.height = std::stoi(next_token(in));
    h.maxval = std::stoi(next_token(in));
  } catch (const std::exception&) {
    fail(path, "malformed netpbm header");
  }
  if (h.width <= 0 || h.height <= 0) fail(path, "non-positive image dimensions");
  if (h.maxval <= 0 || h.maxval > 255) fail(path, "unsupported maxval (must be 1..255)");
  return h;
}

void read_raster(std::istream& in, std::vector<uint8_t>& out,
                 const std::filesystem::path& path) {
  in.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (static_cast<size_t>(in.gcount()) != out.size()) fail(path, "truncated pixel data");
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open for reading");
  PnmHeader h = read_header(in, path);
  if (h.magic != "P5") fail(path, "not a binary PGM (expected magic P5)");
  GrayImage img(h.width, h.height);
  read_raster(in, img.data, path);
  return img;
}

RgbImage read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open for reading");
  PnmHeader h = read_header(in, path);
  if (h.magic != "P6") fail(path, "not a binary PPM (expected magic P6)");
  RgbImage img(h.width, h.height);
  read_raster(in, img.data, path);
  return img;
}

void write_pgm(const GrayImage& image, const std::filesystem::path& path) {
  if (image.empty()) throw std::invalid_argument("write_pgm: empty image");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(path, "cannot open for writing");
  char header[64];
  std::snprintf(header, sizeof(header), "P5\n%d %d\n255\n", image.width, image.height);
  out << header;
  out.write(reinterpret_cast<const char*>(image.data.data()),
            static_cast<std::streamsize>(image.data.size()));
  if (!out) fail(path, "write failed");
}

void write_pgm(const BinaryImage& image, const std::filesystem::path& path) {
  GrayImage vis(image.width, image.height);
  for (size_t i = 0; i < image.data.size(); ++i) vis.data[i] = image.data[i] ? 255 : 0;
  write_pgm(vis, path);
}

GrayImage load_gray(const std::filesystem::path& path, const LumaWeights& luma) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) fail(path, "cannot open for reading");
  std::string magic = next_token(probe);
  probe.close();
  if (magic == "P5") return read_pgm(path);
  if (magic == "P6") return to_grayscale(read_ppm(path), luma);
  fail(path, "unsupported image format (expected P5 or P6)");
}

}  // namespace textile
