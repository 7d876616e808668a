#pragma once

#include "textile/dataset.hpp"

namespace textile {

// One sweep cell: the parameter setting, the training outcome, and the
// accuracy of the resulting model on the full feature set.
struct SweepRow {
  int input_units = 0;
  int hidden_units = 0;
  int output_units = 0;
  double pc = 0.0;
  double pm = 0.0;
  long long m = 0;
  double error = 0.0;
  double fitness = 0.0;
  bool converged = false;
  long long elapsed_cycles = 0;
  long long cycle_limit = 0;
  double elapsed_seconds = 0.0;  // 0 when the wall-clock stop is disabled
  std::string stop_reason;
  double accuracy_pct = 0.0;

  bool operator==(const SweepRow&) const = default;
};

std::vector<long long> default_population_sizes();  // 64 .. 10000, 9 values
std::vector<double> default_crossover_rates();      // 0.99 down to 0.5
std::vector<double> default_mutation_rates_low();   // 0.001 .. 0.01
std::vector<double> default_mutation_rates_high();  // 0.01 .. 0.5

// Trains one cell on the round-0 split of `set` and tests on all of it.
// Row index i uses seed base.rng_seed + i, so rows are independent but the
// whole sweep replays from one seed.
SweepRow run_cell(const FeatureSet& set, const NetworkTopology& topology,
                  const WeightCodec& codec, const GaParams& params);

std::vector<SweepRow> sweep_population(const FeatureSet& set, const std::vector<long long>& sizes,
                                       const NetworkTopology& topology, const WeightCodec& codec,
                                       const GaParams& base);

std::vector<SweepRow> sweep_crossover(const FeatureSet& set, const std::vector<double>& rates,
                                      const NetworkTopology& topology, const WeightCodec& codec,
                                      const GaParams& base);

// Duplicate rates are dropped with a warning on stderr; rows come out
// sorted by mutation rate ascending.
std::vector<SweepRow> sweep_mutation(const FeatureSet& set, const std::vector<double>& rates,
                                     const NetworkTopology& topology, const WeightCodec& codec,
                                     const GaParams& base);

// Hidden-layer widths visited by pruning: down from `start` by `step`,
// switching to single steps once within one `step` of `stop`. The default
// (30, 2, 8) yields 30,28,...,12,10,9,8.
std::vector<int> hidden_width_schedule(int start, int step, int stop);

struct PruneResult {
  std::vector<TrainedModel> models;
  std::vector<SweepRow> rows;
};

// Trains and tests a fresh network at every width in the schedule.
PruneResult prune_hidden(const FeatureSet& set, int start, int step, int stop,
                         const NetworkTopology& base, const WeightCodec& codec,
                         const GaParams& params);

// CSV schema:
//   input,hidden,output,Pc,Pm,M,E,F,elapsed_cycles,cycle_limit,
//   elapsed_seconds,stop_reason,accuracy_pct
// The F cell carries the fitness both ways, inverse-error fraction and
// decimal (`1/7=0.14285714285714285`); converged cells read
// `converged=1000000`. Emitting the same rows twice produces identical
// bytes, and parse_report(emit_report(rows)) == rows.
void emit_report(const std::vector<SweepRow>& rows, const std::filesystem::path& path);
std::vector<SweepRow> parse_report(const std::filesystem::path& path);

}  // namespace textile
