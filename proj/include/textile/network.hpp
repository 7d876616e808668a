#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include "textile/defect_class.hpp"
#include "textile/genome.hpp"

namespace textile {

// Threshold activation: 0 for v <= 0, 1 for v > 0.
inline uint8_t step(double v) { return v > 0.0 ? 1 : 0; }

// One forward pass. Every unit computes step(sum(w_i * x_i) + bias); hidden
// outputs are the 0/1 bits fed to the output layer. Weights are laid out in
// decode order.
std::vector<uint8_t> forward(const NetworkTopology& topology, std::span<const double> weights,
                             std::span<const double> x);

// Allocation-free core of forward(); hidden and outputs are caller-owned
// buffers sized to the topology. Skips argument validation.
void forward_into(const NetworkTopology& topology, std::span<const double> weights,
                  std::span<const double> x, std::span<uint8_t> hidden,
                  std::span<uint8_t> outputs);

// Exactly one firing output unit names the class; zero or several firing
// units mean the verdict is unknown (and count as a misclassification).
std::optional<DefectClass> classify(std::span<const uint8_t> outputs);

enum class StopReason { TargetFitness, MaxCycles, MaxTime };
const std::string& stop_reason_name(StopReason r);
StopReason parse_stop_reason(const std::string& name);

struct TrainingRecord {
  long long elapsed_cycles = 0;
  double elapsed_seconds = 0.0;  // 0 when the wall-clock stop is disabled
  double final_error = 0.0;
  double final_fitness = 0.0;
  bool converged = false;
  StopReason stop_reason = StopReason::MaxCycles;
  std::vector<double> best_fitness_by_cycle;  // best-ever after each cycle
};

struct TrainedModel {
  NetworkTopology topology;
  WeightCodec codec;
  std::vector<double> weights;
  uint64_t seed = 0;
  TrainingRecord record;
};

// Line-oriented text format: a versioned header (topology, bits per weight,
// seed, stop reason) followed by one weight per line at 17 significant
// digits, in decode order. Load of a saved model is lossless.
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace textile
