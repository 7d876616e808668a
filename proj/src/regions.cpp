#include "textile/regions.hpp"

#include <algorithm>
#include <stdexcept>

namespace textile {

namespace {

// Flood fill from (row, col) over unvisited 1-pixels, 8-connectivity.
DefectRegion trace_component(const BinaryImage& img, std::vector<uint8_t>& visited,
                             int row, int col) {
  const int w = img.width;
  const int h = img.height;
  DefectRegion region;
  region.top = region.bottom = row;
  region.left = region.right = col;

  std::vector<PixelCoord> stack{{row, col}};
  visited[static_cast<size_t>(row) * w + col] = 1;
  while (!stack.empty()) {
    const PixelCoord p = stack.back();
    stack.pop_back();
    region.pixels.push_back(p);
    region.top = std::min(region.top, p.row);
    region.bottom = std::max(region.bottom, p.row);
    region.left = std::min(region.left, p.col);
    region.right = std::max(region.right, p.col);

    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        if (dr == 0 && dc == 0) continue;
        const int nr = p.row + dr;
        const int nc = p.col + dc;
        if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
        const size_t idx = static_cast<size_t>(nr) * w + nc;
        if (visited[idx] || img.data[idx] == 0) continue;
        visited[idx] = 1;
        stack.push_back({nr, nc});
      }
    }
  }
  std::sort(region.pixels.begin(), region.pixels.end());
  return region;
}

}  // namespace

std::vector<DefectRegion> connected_regions(const BinaryImage& img) {
  std::vector<DefectRegion> regions;
  if (img.empty()) return regions;

  std::vector<uint8_t> visited(img.pixel_count(), 0);
  for (int row = 0; row < img.height; ++row) {
    for (int col = 0; col < img.width; ++col) {
      const size_t idx = static_cast<size_t>(row) * img.width + col;
      if (img.data[idx] == 0 || visited[idx]) continue;
      regions.push_back(trace_component(img, visited, row, col));
    }
  }
  return regions;
}

BinaryImage remove_noise(const BinaryImage& img, int theta_md) {
  if (theta_md < 1) throw std::invalid_argument("remove_noise: theta_md must be >= 1");
  BinaryImage out = img;
  for (const DefectRegion& region : connected_regions(img)) {
    if (region.size() >= theta_md) continue;
    for (const PixelCoord& p : region.pixels) out.at(p.col, p.row) = 0;
  }
  return out;
}

DefectWindow defect_window(const std::vector<DefectRegion>& regions) {
  DefectWindow window;
  for (const DefectRegion& r : regions) {
    if (!window.present) {
      window = DefectWindow{r.top, r.left, r.bottom, r.right, true};
    } else {
      window.top = std::min(window.top, r.top);
      window.left = std::min(window.left, r.left);
      window.bottom = std::max(window.bottom, r.bottom);
      window.right = std::max(window.right, r.right);
    }
  }
  return window;
}

}  // namespace textile
