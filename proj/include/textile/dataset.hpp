#pragma once

#include <filesystem>

#include "textile/defect_class.hpp"
#include "textile/ga.hpp"
#include "textile/pipeline.hpp"

namespace textile {

// Inclusive pixel range at the 512x512 reference scale; geometry scales
// linearly with the image side.
struct GeometryRange {
  int min = 0;
  int max = 0;
};

// Per-class defect geometry. Defaults are calibrated so every injected
// component keeps at least 40 gray levels of contrast through the low-pass
// filter and stays at or above the minimum defect size after denoising.
struct DefectGeometry {
  GeometryRange color_yarn_width{9, 14};
  GeometryRange color_yarn_length{205, 297};
  GeometryRange missing_yarn_width{3, 5};
  GeometryRange hole_semi_axis{15, 27};
  GeometryRange spot_semi_axis{8, 13};
  GeometryRange spot_satellite_semi_axis{4, 6};
};

// Synthetic knitted-fabric corpus description. Default class counts follow
// the inventory (6, 16, 16, 11, 18, 33), one hundred images in total.
struct CorpusSpec {
  std::array<int, kClassCount> class_counts = {6, 16, 16, 11, 18, 33};
  int image_size = 512;
  DefectGeometry geometry;
  int noise_amplitude = 8;  // background pixel jitter, uniform in +/- this
  int min_defect_px = 12;   // no injected component smaller than this
  uint64_t seed = 1;

  int total() const;
  void validate() const;  // throws std::invalid_argument
};

struct LabeledImage {
  std::string name;
  DefectClass label = DefectClass::DefectFree;
  GrayImage image;
};

// Deterministic per seed: image i derives its own stream from (seed, i), so
// generation order (or parallelism) cannot change a single pixel. Every
// defective image carries one injected defect with at least 40 gray levels
// of contrast against the background texture.
std::vector<LabeledImage> generate_corpus(const CorpusSpec& spec);

// On-disk layout: <dir>/fabric_NNN.pgm plus <dir>/labels.csv with
// `filename,class` rows.
void write_corpus(const std::vector<LabeledImage>& corpus, const std::filesystem::path& dir);
std::vector<std::pair<std::string, DefectClass>> read_labels(const std::filesystem::path& dir);

struct FeatureSet {
  std::vector<ScaledFeatures> features;
  std::vector<DefectClass> labels;

  size_t size() const { return features.size(); }
};

FeatureSet extract_features(const std::vector<LabeledImage>& corpus,
                            const PipelineConfig& config = {});

// `label,h,w,r,n` rows; numbers in shortest round-trip decimal form.
void write_features_csv(const FeatureSet& set, const std::filesystem::path& path);
FeatureSet read_features_csv(const std::filesystem::path& path);

// Loads a corpus directory's features: features.csv when present, otherwise
// runs the imaging pipeline over every listed image.
FeatureSet load_corpus_features(const std::filesystem::path& dir,
                                const PipelineConfig& config = {});

// One train/test partition of the rotating split-and-retrain protocol.
// Round 0 stratifies 53% of the corpus into training (largest-remainder
// apportionment per class, first members in corpus order). Each later round
// keeps the newer half of the previous training set and refills to size
// from a per-class rotation cursor over the rest, so members cycle through
// training across rounds.
struct SplitPlan {
  int round = 0;
  std::vector<size_t> train_ids;
  std::vector<size_t> test_ids;
};

SplitPlan make_split(const std::vector<DefectClass>& labels, int round);

TrainingSet to_training_set(const FeatureSet& set, const std::vector<size_t>& ids);

// Percent of vectors classified into their labeled class; an unknown
// verdict (no unit or several units firing) counts as wrong.
double evaluate_accuracy_pct(const NetworkTopology& topology, std::span<const double> weights,
                             const FeatureSet& set);

// The value occurring most often; among equally frequent values (and when
// every value is distinct) the one closest to the mean, ties toward the
// lower value.
double modal_value(const std::vector<double>& values);

struct RoundResult {
  SplitPlan split;
  TrainedModel model;
  double accuracy_pct = 0.0;  // on the full corpus
};

struct ProtocolResult {
  std::vector<RoundResult> rounds;
  double modal_accuracy_pct = 0.0;
  size_t modal_round = 0;  // first round achieving the modal accuracy
};

// Train/test rounds of the rotation protocol (3 to 5), one model per round
// with per-round seeds params.rng_seed + round, each tested on the full
// corpus. The modal accuracy picks the representative round.
ProtocolResult repeated_train_eval(const FeatureSet& set, const NetworkTopology& topology,
                                   const WeightCodec& codec, const GaParams& params, int rounds);

}  // namespace textile
