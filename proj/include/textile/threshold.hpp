#pragma once

#include <array>
#include <cstdint>

#include "textile/image.hpp"

namespace textile {

struct Histogram {
  std::array<uint32_t, 256> bins{};

  uint64_t total() const;
};

Histogram histogram(const GrayImage& img);

// Lower/upper gray-level cut, inclusive on both ends. `degenerate` is set
// when only a single peak exists and low == high; callers treat such an
// image as defect-free.
struct ThresholdPair {
  int low = 0;
  int high = 255;
  bool degenerate = false;
};

// Two-peak rule: the tallest bin is the background peak, the tallest bin at
// least `min_peak_distance` levels away is the object peak. One cut sits at
// the integer midpoint between the peaks and the other at 0 or 255,
// depending on which side of the background the object lies (darker object
// keeps [0, mid], brighter keeps [mid, 255]). Ties pick the lower intensity.
// Throws std::invalid_argument on an all-zero histogram.
ThresholdPair peak_thresholds(const Histogram& hist, int min_peak_distance = 32);

// b(x,y) = 1 iff low <= p(x,y) <= high.
BinaryImage binarize(const GrayImage& img, const ThresholdPair& t);

}  // namespace textile
