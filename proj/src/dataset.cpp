#include "textile/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>

#include "textile/parallel.hpp"
#include "textile/text.hpp"

namespace textile {

namespace {

constexpr uint64_t kTagImage = 0x496d6167;

int clamp_byte(int v) { return std::clamp(v, 0, 255); }

// integer jitter uniform in [-amp, +amp]
int jitter(SplitMix64& rng, int amp) {
  return static_cast<int>(rng.next_below(2 * amp + 1)) - amp;
}

// Knit-like background: vertical wales, fainter horizontal courses, and
// per-pixel noise. All integer arithmetic, so the corpus is byte-identical
// across platforms.
GrayImage knit_background(int size, int base, int noise_amp, SplitMix64& rng) {
  GrayImage img(size, size);
  for (int y = 0; y < size; ++y) {
    const int course = (y % 8 < 4) ? 2 : -2;
    for (int x = 0; x < size; ++x) {
      const int wale = (x % 6 < 3) ? 4 : -4;
      img.at(x, y) =
          static_cast<uint8_t>(clamp_byte(base + wale + course + jitter(rng, noise_amp)));
    }
  }
  return img;
}

void paint_rect(GrayImage& img, int x0, int x1, int y0, int y1, int value, SplitMix64& rng) {
  x0 = std::max(x0, 0);
  y0 = std::max(y0, 0);
  x1 = std::min(x1, img.width);
  y1 = std::min(y1, img.height);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      img.at(x, y) = static_cast<uint8_t>(clamp_byte(value + jitter(rng, 5)));
    }
  }
}

void paint_ellipse(GrayImage& img, int cx, int cy, int a, int b, int value, SplitMix64& rng) {
  for (int y = std::max(cy - b, 0); y <= std::min(cy + b, img.height - 1); ++y) {
    for (int x = std::max(cx - a, 0); x <= std::min(cx + a, img.width - 1); ++x) {
      const long long dx = x - cx;
      const long long dy = y - cy;
      if (dx * dx * b * b + dy * dy * a * a <= static_cast<long long>(a) * a * b * b) {
        img.at(x, y) = static_cast<uint8_t>(clamp_byte(value + jitter(rng, 5)));
      }
    }
  }
}

// Bright defects ride +72..84 above the base shade and dark ones the same
// below, beyond the 40-level contrast floor the histogram-peak thresholds
// need after low-pass attenuation.
struct DefectPainter {
  GrayImage& img;
  SplitMix64& rng;
  int base;
  const DefectGeometry& geometry;

  int size() const { return img.width; }
  double f() const { return size() / 512.0; }
  int scaled(int v, int lo) const { return std::max(lo, static_cast<int>(v * f())); }
  int margin() const { return scaled(24, 8); }
  int range(int lo, int hi) const { return lo + static_cast<int>(rng.next_below(hi - lo + 1)); }
  // draw from a reference-scale range, scaled to this image
  int range(const GeometryRange& r, int lo) const {
    return range(scaled(r.min, lo), std::max(scaled(r.max, lo), scaled(r.min, lo)));
  }

  void color_yarn() {
    const int w = range(geometry.color_yarn_width, 6);
    const int len = range(geometry.color_yarn_length, 40);
    const int x0 = range(margin(), size() - margin() - w);
    const int y0 = range(margin(), size() - margin() - len);
    paint_rect(img, x0, x0 + w, y0, y0 + len, base + 72, rng);
  }

  void vertical_missing_yarn() {
    const int w = range(geometry.missing_yarn_width.min, geometry.missing_yarn_width.max);
    const int x0 = range(margin(), size() - margin() - w);
    paint_rect(img, x0, x0 + w, 0, size(), base + 84, rng);
  }

  void horizontal_missing_yarn() {
    const int h = range(geometry.missing_yarn_width.min, geometry.missing_yarn_width.max);
    const int y0 = range(margin(), size() - margin() - h);
    paint_rect(img, 0, size(), y0, y0 + h, base + 84, rng);
  }

  void hole() {
    const int a = range(geometry.hole_semi_axis, 8);
    const int b = range(geometry.hole_semi_axis, 8);
    const int cx = range(margin() + a, size() - margin() - a);
    const int cy = range(margin() + b, size() - margin() - b);
    paint_ellipse(img, cx, cy, a, b, base - 84, rng);
  }

  void spot() {
    const int a = range(geometry.spot_semi_axis, 6);
    const int b = range(geometry.spot_semi_axis, 6);
    const int reach = std::max(a, b) + scaled(6, 4) + 18;
    const int cx = range(margin() + reach, size() - margin() - reach);
    const int cy = range(margin() + reach, size() - margin() - reach);
    paint_ellipse(img, cx, cy, a, b, base - 76, rng);

    const int satellites = 1 + static_cast<int>(rng.next_below(2));
    for (int s = 0; s < satellites; ++s) {
      const int sa = range(geometry.spot_satellite_semi_axis, 4);
      const int sb = range(geometry.spot_satellite_semi_axis, 4);
      // keep a clear gap so smoothing cannot bridge satellite and body
      const int dist = std::max(a, b) + std::max(sa, sb) + 12 + static_cast<int>(rng.next_below(7));
      const int dx = rng.next() & 1 ? dist : -dist;
      const int dy = s == 0 ? (rng.next() & 1 ? dist : -dist) : 0;
      paint_ellipse(img, cx + dx, cy + dy, sa, sb, base - 76, rng);
    }
  }

  void paint(DefectClass label) {
    switch (label) {
      case DefectClass::ColorYarn: color_yarn(); break;
      case DefectClass::VerticalMissingYarn: vertical_missing_yarn(); break;
      case DefectClass::HorizontalMissingYarn: horizontal_missing_yarn(); break;
      case DefectClass::Hole: hole(); break;
      case DefectClass::Spot: spot(); break;
      case DefectClass::DefectFree: break;
    }
  }
};

// Largest-remainder apportionment of `total` slots proportional to
// `weights`; ties go to the lower index. Exact integer arithmetic.
std::vector<int> apportion(const std::vector<long long>& weights, long long total) {
  const long long sum = std::accumulate(weights.begin(), weights.end(), 0LL);
  if (sum <= 0) throw std::invalid_argument("apportion: weights sum to zero");
  std::vector<int> result(weights.size());
  std::vector<std::pair<long long, size_t>> remainders;
  long long assigned = 0;
  for (size_t i = 0; i < weights.size(); ++i) {
    const long long scaled = total * weights[i];
    result[i] = static_cast<int>(scaled / sum);
    assigned += result[i];
    remainders.push_back({scaled % sum, i});
  }
  std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (long long k = 0; k < total - assigned; ++k) ++result[remainders[k].second];
  return result;
}

}  // namespace

int CorpusSpec::total() const {
  return std::accumulate(class_counts.begin(), class_counts.end(), 0);
}

void CorpusSpec::validate() const {
  for (int c : class_counts) {
    if (c < 0) throw std::invalid_argument("corpus spec: negative class count");
  }
  if (total() < 1) throw std::invalid_argument("corpus spec: empty corpus");
  if (image_size < 32) throw std::invalid_argument("corpus spec: image_size too small");
  if (noise_amplitude < 0 || noise_amplitude > 20)
    throw std::invalid_argument("corpus spec: noise_amplitude out of range");
  if (min_defect_px < 1) throw std::invalid_argument("corpus spec: min_defect_px must be >= 1");
  for (const GeometryRange& r :
       {geometry.color_yarn_width, geometry.color_yarn_length, geometry.missing_yarn_width,
        geometry.hole_semi_axis, geometry.spot_semi_axis, geometry.spot_satellite_semi_axis}) {
    if (r.min < 1 || r.max < r.min)
      throw std::invalid_argument("corpus spec: bad defect geometry range");
  }
}

std::vector<LabeledImage> generate_corpus(const CorpusSpec& spec) {
  spec.validate();
  std::vector<DefectClass> labels;
  for (int c = 0; c < kClassCount; ++c) {
    labels.insert(labels.end(), spec.class_counts[c], static_cast<DefectClass>(c));
  }

  std::vector<LabeledImage> corpus(labels.size());
  parallel_for(labels.size(), [&](size_t i) {
    SplitMix64 rng(derive_stream(spec.seed, i, static_cast<uint64_t>(labels[i]), kTagImage));
    const int base = 120 + static_cast<int>(rng.next_below(51));  // shade varies per image
    LabeledImage& entry = corpus[i];
    entry.label = labels[i];
    char name[32];
    std::snprintf(name, sizeof(name), "fabric_%03zu.pgm", i);
    entry.name = name;
    entry.image = knit_background(spec.image_size, base, spec.noise_amplitude, rng);
    DefectPainter painter{entry.image, rng, base, spec.geometry};
    painter.paint(entry.label);
  });
  return corpus;
}

void write_corpus(const std::vector<LabeledImage>& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream labels(dir / "labels.csv", std::ios::trunc);
  if (!labels) throw IoError((dir / "labels.csv").string() + ": cannot open for writing");
  labels << "filename,class\n";
  for (const LabeledImage& entry : corpus) {
    write_pgm(entry.image, dir / entry.name);
    labels << entry.name << "," << class_name(entry.label) << "\n";
  }
  if (!labels) throw IoError((dir / "labels.csv").string() + ": write failed");
}

std::vector<std::pair<std::string, DefectClass>> read_labels(const std::filesystem::path& dir) {
  const auto path = dir / "labels.csv";
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  std::string line;
  if (!std::getline(in, line) || line != "filename,class")
    throw IoError(path.string() + ": missing `filename,class` header");

  std::vector<std::pair<std::string, DefectClass>> labels;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 2) throw IoError(path.string() + ": malformed row '" + line + "'");
    labels.emplace_back(cells[0], parse_class(cells[1]));
  }
  if (labels.empty()) throw IoError(path.string() + ": no entries");
  return labels;
}

FeatureSet extract_features(const std::vector<LabeledImage>& corpus,
                            const PipelineConfig& config) {
  FeatureSet set;
  set.features.resize(corpus.size());
  set.labels.resize(corpus.size());
  parallel_for(corpus.size(), [&](size_t i) {
    set.features[i] = inspect_image(corpus[i].image, config).scaled;
    set.labels[i] = corpus[i].label;
  });
  return set;
}

void write_features_csv(const FeatureSet& set, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out << "label,h,w,r,n\n";
  for (size_t i = 0; i < set.size(); ++i) {
    const ScaledFeatures& s = set.features[i];
    out << class_name(set.labels[i]) << "," << format_double(s.h) << "," << format_double(s.w)
        << "," << format_double(s.r) << "," << format_double(s.n) << "\n";
  }
  if (!out) throw IoError(path.string() + ": write failed");
}

FeatureSet read_features_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  std::string line;
  if (!std::getline(in, line) || line != "label,h,w,r,n")
    throw IoError(path.string() + ": missing `label,h,w,r,n` header");

  FeatureSet set;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 5) throw IoError(path.string() + ": malformed row '" + line + "'");
    set.labels.push_back(parse_class(cells[0]));
    set.features.push_back(ScaledFeatures{parse_double(cells[1]), parse_double(cells[2]),
                                          parse_double(cells[3]), parse_double(cells[4])});
  }
  if (set.size() == 0) throw IoError(path.string() + ": no entries");
  return set;
}

FeatureSet load_corpus_features(const std::filesystem::path& dir, const PipelineConfig& config) {
  const auto cache = dir / "features.csv";
  if (std::filesystem::exists(cache)) return read_features_csv(cache);

  const auto labels = read_labels(dir);
  std::vector<LabeledImage> corpus(labels.size());
  parallel_for(labels.size(), [&](size_t i) {
    corpus[i].name = labels[i].first;
    corpus[i].label = labels[i].second;
    corpus[i].image = load_gray(dir / labels[i].first, config.luma);
  });
  return extract_features(corpus, config);
}

SplitPlan make_split(const std::vector<DefectClass>& labels, int round) {
  if (round < 0) throw std::invalid_argument("make_split: round must be >= 0");
  const size_t n = labels.size();
  if (n < 2) throw std::invalid_argument("make_split: need at least two samples");

  // 53% of the corpus trains; scales proportionally when the corpus is not
  // one hundred vectors.
  const long long train_total =
      std::clamp<long long>(std::llround(0.53 * static_cast<double>(n)), 1,
                            static_cast<long long>(n) - 1);

  std::array<std::vector<size_t>, kClassCount> by_class;
  for (size_t i = 0; i < n; ++i) by_class[static_cast<int>(labels[i])].push_back(i);

  std::vector<long long> counts(kClassCount);
  for (int c = 0; c < kClassCount; ++c) counts[c] = static_cast<long long>(by_class[c].size());
  const std::vector<int> shares = apportion(counts, train_total);

  // Round 0: the first share of every class, in corpus order. The member
  // lists below stay in age order (oldest first) so later rounds can retire
  // the older half.
  std::array<std::vector<size_t>, kClassCount> train;
  std::array<size_t, kClassCount> cursor{};
  for (int c = 0; c < kClassCount; ++c) {
    train[c].assign(by_class[c].begin(), by_class[c].begin() + shares[c]);
    cursor[c] = shares[c] % std::max<size_t>(by_class[c].size(), 1);
  }

  const std::vector<int> keeps =
      apportion(std::vector<long long>(shares.begin(), shares.end()), (train_total + 1) / 2);

  for (int r = 1; r <= round; ++r) {
    for (int c = 0; c < kClassCount; ++c) {
      const auto& members = by_class[c];
      if (members.empty()) continue;
      std::vector<size_t> next(train[c].end() - keeps[c], train[c].end());
      std::set<size_t> taken(next.begin(), next.end());
      int need = shares[c] - keeps[c];
      while (need > 0) {
        const size_t candidate = members[cursor[c]];
        cursor[c] = (cursor[c] + 1) % members.size();
        if (taken.contains(candidate)) continue;
        taken.insert(candidate);
        next.push_back(candidate);
        --need;
      }
      train[c] = std::move(next);
    }
  }

  SplitPlan plan;
  plan.round = round;
  for (int c = 0; c < kClassCount; ++c)
    plan.train_ids.insert(plan.train_ids.end(), train[c].begin(), train[c].end());
  std::sort(plan.train_ids.begin(), plan.train_ids.end());
  std::set<size_t> in_train(plan.train_ids.begin(), plan.train_ids.end());
  for (size_t i = 0; i < n; ++i) {
    if (!in_train.contains(i)) plan.test_ids.push_back(i);
  }
  return plan;
}

TrainingSet to_training_set(const FeatureSet& set, const std::vector<size_t>& ids) {
  TrainingSet ts;
  ts.inputs = 4;
  ts.outputs = kClassCount;
  for (size_t id : ids) {
    if (id >= set.size()) throw std::invalid_argument("to_training_set: id out of range");
    const auto x = set.features[id].to_array();
    const auto t = one_hot(set.labels[id]);
    ts.samples.push_back({{x.begin(), x.end()}, {t.begin(), t.end()}});
  }
  return ts;
}

double evaluate_accuracy_pct(const NetworkTopology& topology, std::span<const double> weights,
                             const FeatureSet& set) {
  if (set.size() == 0) throw std::invalid_argument("evaluate_accuracy_pct: empty set");
  std::vector<uint8_t> hidden(topology.hidden_units);
  std::vector<uint8_t> outputs(topology.output_units);
  long long correct = 0;
  for (size_t i = 0; i < set.size(); ++i) {
    const auto x = set.features[i].to_array();
    forward_into(topology, weights, x, hidden, outputs);
    const auto verdict = classify(outputs);
    if (verdict && *verdict == set.labels[i]) ++correct;
  }
  return 100.0 * static_cast<double>(correct) / static_cast<double>(set.size());
}

double modal_value(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("modal_value: no values");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());

  size_t best_count = 0;
  for (double v : values) {
    const size_t count = std::count(values.begin(), values.end(), v);
    best_count = std::max(best_count, count);
  }
  double winner = 0.0;
  bool have = false;
  for (double v : values) {
    if (static_cast<size_t>(std::count(values.begin(), values.end(), v)) != best_count) continue;
    if (!have || std::abs(v - mean) < std::abs(winner - mean) ||
        (std::abs(v - mean) == std::abs(winner - mean) && v < winner)) {
      winner = v;
      have = true;
    }
  }
  return winner;
}

ProtocolResult repeated_train_eval(const FeatureSet& set, const NetworkTopology& topology,
                                   const WeightCodec& codec, const GaParams& params, int rounds) {
  if (rounds < 3 || rounds > 5)
    throw std::invalid_argument("repeated_train_eval: rounds must be in [3, 5]");

  ProtocolResult result;
  std::vector<double> accuracies;
  for (int r = 0; r < rounds; ++r) {
    RoundResult rr;
    rr.split = make_split(set.labels, r);
    GaParams round_params = params;
    round_params.rng_seed = params.rng_seed + static_cast<uint64_t>(r);
    rr.model = train(to_training_set(set, rr.split.train_ids), topology, codec, round_params);
    rr.accuracy_pct = evaluate_accuracy_pct(topology, rr.model.weights, set);
    accuracies.push_back(rr.accuracy_pct);
    result.rounds.push_back(std::move(rr));
  }

  result.modal_accuracy_pct = modal_value(accuracies);
  for (size_t r = 0; r < accuracies.size(); ++r) {
    if (accuracies[r] == result.modal_accuracy_pct) {
      result.modal_round = r;
      break;
    }
  }
  return result;
}

}  // namespace textile
