#pragma once

#include <array>

#include "textile/regions.hpp"

namespace textile {

// The four geometric features before scaling: defect-window height and
// width in pixels, height-to-width ratio, and defective-region count.
// All zero when no defect is present.
struct RawFeatures {
  int h_dw = 0;
  int w_dw = 0;
  double r_hw = 0.0;
  int n_dr = 0;

  bool operator==(const RawFeatures&) const = default;
};

struct ScaledFeatures {
  double h = 0.0;
  double w = 0.0;
  double r = 0.0;
  double n = 0.0;

  std::array<double, 4> to_array() const { return {h, w, r, n}; }
  bool operator==(const ScaledFeatures&) const = default;
};

RawFeatures extract_raw(const std::vector<DefectRegion>& regions, const DefectWindow& window);

// h = h_dw/reference*100, w = w_dw/reference*100, r = 100*r_hw, and
// n = ((n_dr-1)*10^999)^(1/500) evaluated in the log domain (the literal
// power overflows every native float format); n_dr <= 1 maps to 0.
ScaledFeatures scale(const RawFeatures& raw, int reference_dim = 512);

// Log-domain region-count map on its own, for callers that only need n.
double scale_region_count(int n_dr);

}  // namespace textile
