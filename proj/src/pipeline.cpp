#include "textile/pipeline.hpp"

namespace textile {

InspectionStages inspect_image(const GrayImage& gray, const PipelineConfig& config) {
  InspectionStages st;
  st.filtered = convolve(gray, config.mask);
  st.hist = histogram(st.filtered);
  st.thresholds = peak_thresholds(st.hist, config.peak_min_distance);

  if (!st.thresholds.degenerate) {
    st.binary = binarize(st.filtered, st.thresholds);
    st.denoised = remove_noise(st.binary, config.theta_md);
    st.regions = connected_regions(st.denoised);
    st.window = defect_window(st.regions);
  } else {
    st.binary = BinaryImage(gray.width, gray.height, 0);
    st.denoised = st.binary;
  }

  st.raw = extract_raw(st.regions, st.window);
  const int ref = config.scale_reference > 0 ? config.scale_reference : gray.width;
  st.scaled = scale(st.raw, ref);

  if (config.debug_dir) {
    const auto& dir = *config.debug_dir;
    std::filesystem::create_directories(dir);
    write_pgm(gray, dir / "stage1_gray.pgm");
    write_pgm(st.filtered, dir / "stage2_filtered.pgm");
    write_pgm(st.binary, dir / "stage3_binary.pgm");
    write_pgm(st.denoised, dir / "stage4_denoised.pgm");
  }
  return st;
}

}  // namespace textile
