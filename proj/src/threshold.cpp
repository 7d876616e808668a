#include "textile/threshold.hpp"

#include <cstdlib>
#include <stdexcept>

namespace textile {

uint64_t Histogram::total() const {
  uint64_t sum = 0;
  for (uint32_t b : bins) sum += b;
  return sum;
}

Histogram histogram(const GrayImage& img) {
  Histogram h;
  for (uint8_t v : img.data) ++h.bins[v];
  return h;
}

ThresholdPair peak_thresholds(const Histogram& hist, int min_peak_distance) {
  if (min_peak_distance < 1 || min_peak_distance > 255)
    throw std::invalid_argument("peak_thresholds: min_peak_distance out of range");

  int background = -1;
  for (int i = 0; i < 256; ++i) {
    if (hist.bins[i] == 0) continue;
    if (background < 0 || hist.bins[i] > hist.bins[background]) background = i;
  }
  if (background < 0) throw std::invalid_argument("peak_thresholds: empty histogram");

  int object = -1;
  for (int i = 0; i < 256; ++i) {
    if (hist.bins[i] == 0 || std::abs(i - background) < min_peak_distance) continue;
    if (object < 0 || hist.bins[i] > hist.bins[object]) object = i;
  }

  if (object < 0) {
    // single mode: no second peak far enough away
    return ThresholdPair{background, background, true};
  }

  const int mid = (background + object) / 2;
  if (object < background) return ThresholdPair{0, mid, false};
  return ThresholdPair{mid, 255, false};
}

BinaryImage binarize(const GrayImage& img, const ThresholdPair& t) {
  if (t.low > t.high) throw std::invalid_argument("binarize: low threshold above high");
  BinaryImage out(img.width, img.height);
  for (size_t i = 0; i < img.data.size(); ++i) {
    const int p = img.data[i];
    out.data[i] = (t.low <= p && p <= t.high) ? 1 : 0;
  }
  return out;
}

}  // namespace textile
