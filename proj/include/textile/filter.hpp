#pragma once

#include <cstdint>
#include <vector>

#include "textile/image.hpp"

namespace textile {

// Square convolution mask with integer entries and a common denominator.
// The applied weight of entry i is weights[i] / normalizer.
struct ConvolutionMask {
  int size = 0;
  std::vector<int> weights;  // size * size entries, row-major
  int normalizer = 1;

  // 7x7 smoothing mask that favors the horizontal, vertical and diagonal
  // neighbors of the center pixel. Entries sum to the normalizer (109), so
  // the applied weights sum to exactly 1.
  static ConvolutionMask default_lowpass();

  long long weight_sum() const;
  void validate() const;  // throws std::invalid_argument
};

// Pre-rounding numerators: element [y*width+x] is sum(weights * neighborhood)
// as an exact integer; dividing by mask.normalizer gives the filtered value.
// Borders replicate the nearest edge pixel. Exposed separately so the exact
// linear stage can be checked without rounding in the way.
std::vector<int64_t> convolve_accum(const GrayImage& img, const ConvolutionMask& mask);

// round(accum / normalizer) clamped to [0, 255]. Mask side must not exceed
// either image dimension.
GrayImage convolve(const GrayImage& img, const ConvolutionMask& mask);

}  // namespace textile
