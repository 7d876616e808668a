#include "textile/features.hpp"

#include <cmath>
#include <stdexcept>

namespace textile {

RawFeatures extract_raw(const std::vector<DefectRegion>& regions, const DefectWindow& window) {
  if (!window.present) {
    if (!regions.empty())
      throw std::invalid_argument("extract_raw: regions present but window absent");
    return RawFeatures{};
  }
  RawFeatures raw;
  raw.h_dw = window.height();
  raw.w_dw = window.width();
  raw.r_hw = raw.w_dw > 0 ? static_cast<double>(raw.h_dw) / raw.w_dw : 0.0;
  raw.n_dr = static_cast<int>(regions.size());
  return raw;
}

double scale_region_count(int n_dr) {
  if (n_dr <= 1) return 0.0;
  return std::exp((std::log(static_cast<double>(n_dr - 1)) + 999.0 * std::log(10.0)) / 500.0);
}

ScaledFeatures scale(const RawFeatures& raw, int reference_dim) {
  if (reference_dim <= 0) throw std::invalid_argument("scale: reference_dim must be positive");
  ScaledFeatures s;
  s.h = static_cast<double>(raw.h_dw) / reference_dim * 100.0;
  s.w = static_cast<double>(raw.w_dw) / reference_dim * 100.0;
  s.r = 100.0 * raw.r_hw;
  s.n = scale_region_count(raw.n_dr);
  return s;
}

}  // namespace textile
