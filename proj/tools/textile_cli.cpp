#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "textile/experiments.hpp"
#include "textile/text.hpp"

namespace {

using namespace textile;

// exit codes: 0 ok, 1 usage, 2 I/O, 3 data/model validation
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitData = 3;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

// Expands a flat key=value config file into flag tokens. A `pm=0.5` line
// becomes `--pm 0.5`; values with spaces turn into one token per word.
std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open config file");
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    const std::string entry = trim(line);
    if (entry.empty() || entry[0] == '#') continue;
    const auto eq = entry.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ": config line is not key=value: '" + entry + "'");
    const std::string key = trim(entry.substr(0, eq));
    const std::string value = trim(entry.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument(path + ": config line is not key=value: '" + entry + "'");
    tokens.push_back("--" + key);
    std::istringstream words(value);
    std::string word;
    while (words >> word) tokens.push_back(word);
  }
  return tokens;
}

// Replaces the first `--config FILE` (or `--config=FILE`) with the file's
// flags, in place. Flags given after --config override the file under the
// take-last option policy.
std::vector<std::string> expand_config_arg(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  for (size_t i = 0; i < args.size(); ++i) {
    std::string path;
    size_t span = 0;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      span = 2;
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      span = 1;
    } else {
      continue;
    }
    const auto tokens = config_tokens(path);
    args.erase(args.begin() + i, args.begin() + i + span);
    args.insert(args.begin() + i, tokens.begin(), tokens.end());
    break;
  }
  return args;
}

struct GaFlags {
  GaParams params;
  int hidden = 26;
  int bits_per_weight = 16;

  NetworkTopology topology() const { return NetworkTopology{4, hidden, kClassCount, true}; }
  WeightCodec codec() const { return WeightCodec{bits_per_weight}; }
};

void add_ga_flags(CLI::App* cmd, GaFlags& f) {
  cmd->add_option("--hidden", f.hidden, "Hidden-layer units")->capture_default_str();
  cmd->add_option("--bits", f.bits_per_weight, "Bits per encoded weight")->capture_default_str();
  cmd->add_option("--pop-size", f.params.population_size, "Population size M")
      ->capture_default_str();
  cmd->add_option("--pc", f.params.crossover_rate, "Crossover rate")->capture_default_str();
  cmd->add_option("--pm", f.params.mutation_rate, "Per-bit mutation rate")->capture_default_str();
  cmd->add_option("--target-fitness", f.params.target_fitness,
                  "Stop once best fitness exceeds this")
      ->capture_default_str();
  cmd->add_option("--max-cycles", f.params.max_cycles, "Training cycle budget")
      ->capture_default_str();
  cmd->add_option("--max-seconds", f.params.max_seconds,
                  "Wall-clock budget per training run; 0 disables")
      ->capture_default_str();
  cmd->add_option("--seed", f.params.rng_seed, "Base RNG seed")->capture_default_str();
}

void add_pipeline_flags(CLI::App* cmd, PipelineConfig& config) {
  cmd->add_option("--theta-md", config.theta_md, "Minimum defect size in pixels")
      ->capture_default_str();
  cmd->add_option("--peak-distance", config.peak_min_distance,
                  "Minimum histogram peak separation")
      ->capture_default_str();
}

void print_round(const RoundResult& rr, size_t index) {
  const TrainingRecord& rec = rr.model.record;
  std::cout << "round " << index << ": train=" << rr.split.train_ids.size()
            << " test=" << rr.split.test_ids.size() << " cycles=" << rec.elapsed_cycles
            << " stop=" << stop_reason_name(rec.stop_reason)
            << " E=" << format_double(rec.final_error)
            << " accuracy=" << format_double(rr.accuracy_pct) << "%\n";
}

int cmd_gen_data(const std::filesystem::path& out_dir, const CorpusSpec& spec,
                 const PipelineConfig& pipeline) {
  const auto corpus = generate_corpus(spec);
  write_corpus(corpus, out_dir);
  const FeatureSet features = extract_features(corpus, pipeline);
  write_features_csv(features, out_dir / "features.csv");
  std::cout << "wrote " << corpus.size() << " images and features.csv to " << out_dir.string()
            << "\n";
  return kExitOk;
}

int cmd_inspect(const std::filesystem::path& image_path, const std::filesystem::path& model_path,
                PipelineConfig pipeline, const std::string& debug_dir) {
  const TrainedModel model = load_model(model_path);
  if (!debug_dir.empty()) pipeline.debug_dir = debug_dir;

  const GrayImage gray = load_gray(image_path, pipeline.luma);
  const InspectionStages stages = inspect_image(gray, pipeline);

  std::string verdict;
  if (stages.defect_free()) {
    // no region survives denoising; the network is not consulted
    verdict = class_name(DefectClass::DefectFree);
  } else {
    const auto outputs = forward(model.topology, model.weights, stages.scaled.to_array());
    const auto decision = classify(outputs);
    verdict = decision ? class_name(*decision) : "Unknown";
  }

  std::cout << "verdict: " << verdict << "\n";
  std::cout << "raw: h_dw=" << stages.raw.h_dw << " w_dw=" << stages.raw.w_dw
            << " r_hw=" << format_double(stages.raw.r_hw) << " n_dr=" << stages.raw.n_dr << "\n";
  std::cout << "scaled: h=" << format_double(stages.scaled.h)
            << " w=" << format_double(stages.scaled.w) << " r=" << format_double(stages.scaled.r)
            << " n=" << format_double(stages.scaled.n) << "\n";
  return kExitOk;
}

int cmd_train(const std::filesystem::path& corpus_dir, const std::filesystem::path& out_path,
              const GaFlags& flags, const PipelineConfig& pipeline, int rounds) {
  const FeatureSet features = load_corpus_features(corpus_dir, pipeline);
  const ProtocolResult result =
      repeated_train_eval(features, flags.topology(), flags.codec(), flags.params, rounds);

  for (size_t r = 0; r < result.rounds.size(); ++r) print_round(result.rounds[r], r);
  std::cout << "modal accuracy: " << format_double(result.modal_accuracy_pct) << "% (round "
            << result.modal_round << ")\n";

  save_model(result.rounds[result.modal_round].model, out_path);
  std::cout << "saved model to " << out_path.string() << "\n";
  return kExitOk;
}

int cmd_evaluate(const std::filesystem::path& corpus_dir,
                 const std::filesystem::path& model_path, const PipelineConfig& pipeline) {
  const TrainedModel model = load_model(model_path);
  const FeatureSet features = load_corpus_features(corpus_dir, pipeline);
  const double accuracy =
      evaluate_accuracy_pct(model.topology, model.weights, features);

  std::array<long long, kClassCount> total{}, correct{};
  for (size_t i = 0; i < features.size(); ++i) {
    const auto outputs =
        forward(model.topology, model.weights, features.features[i].to_array());
    const auto verdict = classify(outputs);
    const int c = static_cast<int>(features.labels[i]);
    ++total[c];
    if (verdict && *verdict == features.labels[i]) ++correct[c];
  }

  std::cout << "overall accuracy: " << format_double(accuracy) << "% on " << features.size()
            << " vectors\n";
  for (int c = 0; c < kClassCount; ++c) {
    if (total[c] == 0) continue;
    std::cout << "  " << class_name(static_cast<DefectClass>(c)) << ": " << correct[c] << "/"
              << total[c] << "\n";
  }

  // check the network's own verdict on the all-zero (defect-free) vector,
  // independent of the inspect short circuit
  const std::array<double, 4> zero{0.0, 0.0, 0.0, 0.0};
  const auto zero_out = forward(model.topology, model.weights, zero);
  const auto zero_verdict = classify(zero_out);
  std::cout << "zero-vector verdict: "
            << (zero_verdict ? class_name(*zero_verdict) : std::string("Unknown")) << "\n";
  return kExitOk;
}

int cmd_sweep(const std::filesystem::path& corpus_dir, const std::filesystem::path& out_path,
              const std::string& param, const std::vector<double>& values, const GaFlags& flags,
              const PipelineConfig& pipeline) {
  const FeatureSet features = load_corpus_features(corpus_dir, pipeline);
  const NetworkTopology topology = flags.topology();
  const WeightCodec codec = flags.codec();

  std::vector<SweepRow> rows;
  if (param == "M") {
    std::vector<long long> sizes;
    for (double v : values) sizes.push_back(static_cast<long long>(v));
    if (sizes.empty()) sizes = default_population_sizes();
    rows = sweep_population(features, sizes, topology, codec, flags.params);
  } else if (param == "pc") {
    rows = sweep_crossover(features, values.empty() ? default_crossover_rates() : values,
                           topology, codec, flags.params);
  } else if (param == "pm") {
    rows = sweep_mutation(features, values.empty() ? default_mutation_rates_low() : values,
                          topology, codec, flags.params);
  } else if (param == "pm-high") {
    rows = sweep_mutation(features, values.empty() ? default_mutation_rates_high() : values,
                          topology, codec, flags.params);
  } else {
    throw std::invalid_argument("--param must be one of M, pc, pm, pm-high");
  }

  emit_report(rows, out_path);
  std::cout << "wrote " << rows.size() << " rows to " << out_path.string() << "\n";
  return kExitOk;
}

int cmd_prune(const std::filesystem::path& corpus_dir, const std::filesystem::path& out_path,
              int start, int step, int stop, const GaFlags& flags,
              const PipelineConfig& pipeline) {
  const FeatureSet features = load_corpus_features(corpus_dir, pipeline);
  const PruneResult result = prune_hidden(features, start, step, stop, flags.topology(),
                                          flags.codec(), flags.params);
  emit_report(result.rows, out_path);
  std::cout << "wrote " << result.rows.size() << " rows to " << out_path.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Textile defect inspection: segmentation pipeline, GA-trained classifier, "
               "parameter sweeps"};
  app.require_subcommand(1);
  // later occurrences win, so config-file values yield to explicit flags
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "Generate a synthetic labeled fabric corpus");

  std::string gen_out;
  CorpusSpec spec;
  PipelineConfig gen_pipeline;
  gen->add_option("--out", gen_out, "Output corpus directory")->required();
  gen->add_option("--seed", spec.seed, "Corpus seed")->capture_default_str();
  gen->add_option("--size", spec.image_size, "Image side in pixels")->capture_default_str();
  gen->add_option("--noise", spec.noise_amplitude, "Background noise amplitude")
      ->capture_default_str();
  gen->add_option("--counts", spec.class_counts, "Per-class image counts (6 values)");
  add_pipeline_flags(gen, gen_pipeline);

  // inspect
  auto* inspect = app.add_subcommand("inspect", "Classify a single fabric image");

  std::string inspect_image_path, inspect_model_path, inspect_debug;
  PipelineConfig inspect_pipeline;
  inspect->add_option("--image", inspect_image_path, "PGM/PPM image to inspect")->required();
  inspect->add_option("--model", inspect_model_path, "Trained model file")->required();
  inspect->add_option("--debug-stages", inspect_debug,
                      "Directory for intermediate-stage PGMs");
  add_pipeline_flags(inspect, inspect_pipeline);

  // train
  auto* train_cmd = app.add_subcommand("train", "Train a classifier on a corpus directory");

  std::string train_corpus, train_out = "model.txt";
  GaFlags train_flags;
  PipelineConfig train_pipeline;
  int train_rounds = 3;
  train_cmd->add_option("--corpus", train_corpus, "Corpus directory")->required();
  train_cmd->add_option("--out", train_out, "Model output path")->capture_default_str();
  train_cmd->add_option("--rounds", train_rounds, "Split-and-retrain rounds (3-5)")
      ->capture_default_str();
  add_ga_flags(train_cmd, train_flags);
  add_pipeline_flags(train_cmd, train_pipeline);

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "Evaluate a model on a corpus directory");

  std::string eval_corpus, eval_model;
  PipelineConfig eval_pipeline;
  eval_cmd->add_option("--corpus", eval_corpus, "Corpus directory")->required();
  eval_cmd->add_option("--model", eval_model, "Trained model file")->required();
  add_pipeline_flags(eval_cmd, eval_pipeline);

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a one-parameter sweep and emit a CSV");

  std::string sweep_corpus, sweep_out = "sweep.csv", sweep_param = "M";
  std::vector<double> sweep_values;
  GaFlags sweep_flags;
  PipelineConfig sweep_pipeline;
  sweep_cmd->add_option("--corpus", sweep_corpus, "Corpus directory")->required();
  sweep_cmd->add_option("--out", sweep_out, "Report CSV path")->capture_default_str();
  sweep_cmd->add_option("--param", sweep_param, "Swept parameter: M, pc, pm, pm-high")
      ->check(CLI::IsMember({"M", "pc", "pm", "pm-high"}))
      ->capture_default_str();
  sweep_cmd->add_option("--values", sweep_values, "Explicit value list (default: tuned lists)");
  add_ga_flags(sweep_cmd, sweep_flags);
  add_pipeline_flags(sweep_cmd, sweep_pipeline);

  // prune
  auto* prune_cmd =
      app.add_subcommand("prune", "Retrain at shrinking hidden widths and emit a CSV");

  std::string prune_corpus, prune_out = "prune.csv";
  int prune_start = 30, prune_step = 2, prune_stop = 8;
  GaFlags prune_flags;
  PipelineConfig prune_pipeline;
  prune_cmd->add_option("--corpus", prune_corpus, "Corpus directory")->required();
  prune_cmd->add_option("--out", prune_out, "Report CSV path")->capture_default_str();
  prune_cmd->add_option("--start", prune_start, "First hidden width")->capture_default_str();
  prune_cmd->add_option("--step", prune_step, "Width decrement")->capture_default_str();
  prune_cmd->add_option("--stop", prune_stop, "Last hidden width")->capture_default_str();
  add_ga_flags(prune_cmd, prune_flags);
  add_pipeline_flags(prune_cmd, prune_pipeline);

  std::string config_doc;
  for (CLI::App* sub : app.get_subcommands(nullptr)) {
    sub->add_option("--config", config_doc,
                    "Flat key=value file; every key mirrors one of this subcommand's flags");
  }

  try {
    std::vector<std::string> args = expand_config_arg(argc, argv);
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;  // malformed config lines are usage problems
  }

  try {
    if (gen->parsed()) return cmd_gen_data(gen_out, spec, gen_pipeline);
    if (inspect->parsed())
      return cmd_inspect(inspect_image_path, inspect_model_path, inspect_pipeline, inspect_debug);
    if (train_cmd->parsed())
      return cmd_train(train_corpus, train_out, train_flags, train_pipeline, train_rounds);
    if (eval_cmd->parsed()) return cmd_evaluate(eval_corpus, eval_model, eval_pipeline);
    if (sweep_cmd->parsed())
      return cmd_sweep(sweep_corpus, sweep_out, sweep_param, sweep_values, sweep_flags,
                       sweep_pipeline);
    if (prune_cmd->parsed())
      return cmd_prune(prune_corpus, prune_out, prune_start, prune_step, prune_stop, prune_flags,
                       prune_pipeline);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
