#include "textile/filter.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace textile {

ConvolutionMask ConvolutionMask::default_lowpass() {
  return ConvolutionMask{7,
                         {
                             2, 1, 1, 2, 1, 1, 2,  //
                             1, 3, 2, 3, 2, 3, 1,  //
                             1, 2, 4, 4, 4, 2, 1,  //
                             2, 3, 4, 5, 4, 3, 2,  //
                             1, 2, 4, 4, 4, 2, 1,  //
                             1, 3, 2, 3, 2, 3, 1,  //
                             2, 1, 1, 2, 1, 1, 2,  //
                         },
                         109};
}

long long ConvolutionMask::weight_sum() const {
  return std::accumulate(weights.begin(), weights.end(), 0LL);
}

void ConvolutionMask::validate() const {
  if (size <= 0 || size % 2 == 0) throw std::invalid_argument("mask size must be odd and positive");
  if (weights.size() != static_cast<size_t>(size) * size)
    throw std::invalid_argument("mask weight count does not match size");
  if (normalizer <= 0) throw std::invalid_argument("mask normalizer must be positive");
}

std::vector<int64_t> convolve_accum(const GrayImage& img, const ConvolutionMask& mask) {
  mask.validate();
  if (img.empty()) throw std::invalid_argument("convolve: empty image");
  if (mask.size > img.width || mask.size > img.height)
    throw std::invalid_argument("convolve: mask larger than image");

  const int w = img.width;
  const int h = img.height;
  const int half = mask.size / 2;
  std::vector<int64_t> acc(img.pixel_count());

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int64_t sum = 0;
      const int* mw = mask.weights.data();
      for (int dy = -half; dy <= half; ++dy) {
        const int sy = std::clamp(y + dy, 0, h - 1);
        const uint8_t* row = img.data.data() + static_cast<size_t>(sy) * w;
        for (int dx = -half; dx <= half; ++dx, ++mw) {
          const int sx = std::clamp(x + dx, 0, w - 1);
          sum += static_cast<int64_t>(*mw) * row[sx];
        }
      }
      acc[static_cast<size_t>(y) * w + x] = sum;
    }
  }
  return acc;
}

GrayImage convolve(const GrayImage& img, const ConvolutionMask& mask) {
  const std::vector<int64_t> acc = convolve_accum(img, mask);
  GrayImage out(img.width, img.height);
  const int64_t n = mask.normalizer;
  for (size_t i = 0; i < acc.size(); ++i) {
    // round half away from zero; accumulators are nonnegative for
    // nonnegative masks, negative entries still round correctly
    int64_t v = acc[i] >= 0 ? (acc[i] * 2 + n) / (2 * n) : -((-acc[i] * 2 + n) / (2 * n));
    out.data[i] = static_cast<uint8_t>(std::clamp<int64_t>(v, 0, 255));
  }
  return out;
}

}  // namespace textile
