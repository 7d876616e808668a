#pragma once

#include <functional>
#include <utility>

#include "textile/network.hpp"

namespace textile {

// Error below this counts as converged ("maximum tolerable error").
inline constexpr double kMaxTolerableError = 1e-3;
// Fitness reported for converged members instead of a 1/E blowup.
inline constexpr double kFitnessCap = 1e6;

struct GaParams {
  long long population_size = 8192;
  double crossover_rate = 0.99;
  double mutation_rate = 0.01;
  double target_fitness = 1e3;  // training stops once best fitness exceeds this
  long long max_cycles = 10'000;
  double max_seconds = 60.0;  // <= 0 disables the wall-clock stop
  uint64_t rng_seed = 1;

  void validate() const;  // throws std::invalid_argument
};

struct Sample {
  std::vector<double> x;
  std::vector<uint8_t> target;
};

struct TrainingSet {
  int inputs = 0;
  int outputs = 0;
  std::vector<Sample> samples;
};

// Sum of squared output errors over every vector and output unit. With step
// outputs and 0/1 targets this is the number of wrong output bits. Throws
// on an empty set or mismatched dimensions.
double network_error(const NetworkTopology& topology, std::span<const double> weights,
                     const TrainingSet& set);

double fitness_of(double error);  // 1/E, capped at kFitnessCap when converged
bool is_converged(double error);

struct Population {
  std::vector<Genome> members;
  long long generation = 0;

  size_t size() const { return members.size(); }
};

// M genomes of independent uniform bits, drawn from params.rng_seed.
// Throws when M >= 2^n (the population would exceed the search space).
Population init_population(const GaParams& params, const WeightCodec& codec,
                           const NetworkTopology& topology);

// Indices of members with fitness strictly above the population mean. When
// nothing exceeds the mean (all fitnesses equal) the whole population
// survives.
std::vector<size_t> select_above_average(const std::vector<double>& fitnesses);

// One-point crossover. Both children keep their parent's first `split` bits
// and take the remaining bits from the other parent; split counts from the
// left and must be in [1, n-1].
std::pair<Genome, Genome> crossover(const Genome& a, const Genome& b, size_t split);

// Flips bit k iff draw(k) < pm, draws consumed in bit order.
template <typename DrawFn>
void mutate_with_draws(Genome& g, double pm, DrawFn&& draw) {
  for (uint8_t& bit : g.bits) {
    if (static_cast<double>(draw()) < pm) bit ^= 1;
  }
}

void mutate(Genome& g, double pm, SplitMix64& rng);

// Returns E for a genome; what the GA minimizes.
using Evaluator = std::function<double(const Genome&)>;

struct GenerationStats {
  double best_error = 0.0;
  double best_fitness = 0.0;
  bool converged = false;
  size_t best_index = 0;
  double mean_fitness = 0.0;
};

// Fitness of every member, in member order (evaluation may run in parallel;
// results are indexed, so the order of completion does not matter).
std::vector<double> evaluate_fitnesses(const Population& pop, const Evaluator& eval);
GenerationStats summarize(const std::vector<double>& fitnesses);

// Builds generation g+1 from evaluated fitnesses: above-average selection,
// survivor pairs drawn uniformly with replacement, crossover with
// probability P_c, per-bit mutation, and the best old member carried over
// unmodified in slot 0. All randomness is derived from
// (params.rng_seed, pop.generation, slot), never from global state.
Population next_generation(const Population& pop, const GaParams& params,
                           const std::vector<double>& fitnesses);

struct GenerationResult {
  Population next;
  GenerationStats stats;  // of the generation that was evaluated
};

// evaluate + next_generation in one call.
GenerationResult evolve(const Population& pop, const GaParams& params, const Evaluator& eval);

// Full training loop: evolves until best fitness exceeds
// params.target_fitness, max_cycles generations have run, or the wall-clock
// budget is exhausted. Returns the best genome ever seen, decoded. Bit-for-
// bit reproducible for a fixed seed when the wall-clock stop is disabled.
TrainedModel train(const TrainingSet& set, const NetworkTopology& topology,
                   const WeightCodec& codec, const GaParams& params);

}  // namespace textile
