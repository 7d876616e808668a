#pragma once

#include <filesystem>
#include <optional>

#include "textile/features.hpp"
#include "textile/filter.hpp"
#include "textile/threshold.hpp"

namespace textile {

struct PipelineConfig {
  ConvolutionMask mask = ConvolutionMask::default_lowpass();
  LumaWeights luma;
  int peak_min_distance = 32;
  int theta_md = 12;          // minimum defect size in pixels
  int scale_reference = 0;    // feature-scale denominator; 0 = image width

  // When set, every intermediate stage is written there as a PGM.
  std::optional<std::filesystem::path> debug_dir;
};

// Every stage of one inspection, from the filtered image down to the
// scaled feature vector.
struct InspectionStages {
  GrayImage filtered;
  Histogram hist;
  ThresholdPair thresholds;
  BinaryImage binary;
  BinaryImage denoised;
  std::vector<DefectRegion> regions;
  DefectWindow window;
  RawFeatures raw;
  ScaledFeatures scaled;

  bool defect_free() const { return !window.present; }
};

// Runs filter -> histogram -> peak thresholds -> binarize -> denoise ->
// regions -> window -> features on an already-gray image. A degenerate
// single-peak histogram short-circuits to a defect-free result (an all-pass
// cut at the background peak would turn the whole fabric into one object).
InspectionStages inspect_image(const GrayImage& gray, const PipelineConfig& config = {});

}  // namespace textile
