#pragma once

#include <vector>

#include "textile/image.hpp"

namespace textile {

struct PixelCoord {
  int row = 0;
  int col = 0;

  bool operator==(const PixelCoord&) const = default;
  auto operator<=>(const PixelCoord&) const = default;  // row-major order
};

// One maximal 8-connected component of 1-pixels.
struct DefectRegion {
  std::vector<PixelCoord> pixels;  // sorted row-major
  int top = 0, left = 0, bottom = 0, right = 0;

  int size() const { return static_cast<int>(pixels.size()); }
  int height() const { return bottom - top + 1; }
  int width() const { return right - left + 1; }
};

// Minimal axis-aligned rectangle enclosing every defective region.
struct DefectWindow {
  int top = 0, left = 0, bottom = 0, right = 0;
  bool present = false;

  int height() const { return present ? bottom - top + 1 : 0; }
  int width() const { return present ? right - left + 1 : 0; }
  bool contains(PixelCoord p) const {
    return present && p.row >= top && p.row <= bottom && p.col >= left && p.col <= right;
  }
};

// Partitions the 1-pixels into maximal 8-connected components, ordered by
// their first pixel in row-major scan order.
std::vector<DefectRegion> connected_regions(const BinaryImage& img);

// Clears every 8-connected component smaller than theta_md pixels;
// components of at least theta_md pixels pass through unchanged.
BinaryImage remove_noise(const BinaryImage& img, int theta_md);

DefectWindow defect_window(const std::vector<DefectRegion>& regions);

}  // namespace textile
