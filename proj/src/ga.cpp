#include "textile/ga.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "textile/parallel.hpp"

namespace textile {

namespace {

// Purpose tags for stream derivation; reproduction and mutation of the same
// slot must not share a stream.
constexpr uint64_t kTagInit = 0x496e6974;
constexpr uint64_t kTagReproduce = 0x52657072;
constexpr uint64_t kTagMutate = 0x4d757461;

}  // namespace

void GaParams::validate() const {
  if (population_size < 1) throw std::invalid_argument("params: population_size must be >= 1");
  if (crossover_rate < 0.0 || crossover_rate > 1.0)
    throw std::invalid_argument("params: crossover_rate must be in [0, 1]");
  if (mutation_rate < 0.0 || mutation_rate > 1.0)
    throw std::invalid_argument("params: mutation_rate must be in [0, 1]");
  if (target_fitness <= 0.0) throw std::invalid_argument("params: target_fitness must be positive");
  if (max_cycles < 0) throw std::invalid_argument("params: max_cycles must be >= 0");
}

double network_error(const NetworkTopology& topology, std::span<const double> weights,
                     const TrainingSet& set) {
  if (set.samples.empty()) throw std::invalid_argument("network_error: empty training set");
  if (set.inputs != topology.input_units || set.outputs != topology.output_units)
    throw std::invalid_argument("network_error: set dimensions do not match topology");
  if (static_cast<int>(weights.size()) != topology.weight_count())
    throw std::invalid_argument("network_error: weight count mismatch");

  std::vector<uint8_t> hidden(topology.hidden_units);
  std::vector<uint8_t> outputs(topology.output_units);
  double total = 0.0;
  for (const Sample& s : set.samples) {
    forward_into(topology, weights, s.x, hidden, outputs);
    for (int k = 0; k < topology.output_units; ++k) {
      const int diff = static_cast<int>(outputs[k]) - static_cast<int>(s.target[k]);
      total += diff * diff;
    }
  }
  return total;
}

bool is_converged(double error) { return error < kMaxTolerableError; }

double fitness_of(double error) {
  if (error < 0.0) throw std::invalid_argument("fitness_of: negative error");
  if (error == 0.0) return kFitnessCap;
  return std::min(1.0 / error, kFitnessCap);
}

Population init_population(const GaParams& params, const WeightCodec& codec,
                           const NetworkTopology& topology) {
  params.validate();
  const size_t n = codec.genome_bits(topology);
  if (n < 64 && static_cast<unsigned long long>(params.population_size) >= (1ULL << n))
    throw std::invalid_argument("init_population: population_size must be below 2^n");

  Population pop;
  pop.members.resize(params.population_size);
  parallel_for(pop.members.size(), [&](size_t i) {
    SplitMix64 rng(derive_stream(params.rng_seed, 0, i, kTagInit));
    pop.members[i] = random_genome(n, rng);
  });
  return pop;
}

std::vector<size_t> select_above_average(const std::vector<double>& fitnesses) {
  if (fitnesses.empty()) throw std::invalid_argument("select: no fitnesses");
  double mean = 0.0;
  for (double f : fitnesses) mean += f;
  mean /= static_cast<double>(fitnesses.size());

  std::vector<size_t> survivors;
  for (size_t i = 0; i < fitnesses.size(); ++i) {
    if (fitnesses[i] > mean) survivors.push_back(i);
  }
  if (survivors.empty()) {
    // all members at the mean; keep everyone rather than going extinct
    survivors.resize(fitnesses.size());
    for (size_t i = 0; i < survivors.size(); ++i) survivors[i] = i;
  }
  return survivors;
}

std::pair<Genome, Genome> crossover(const Genome& a, const Genome& b, size_t split) {
  if (a.size() != b.size()) throw std::invalid_argument("crossover: unequal genome lengths");
  if (split < 1 || split >= a.size())
    throw std::invalid_argument("crossover: split must be in [1, n-1]");
  Genome c1 = a;
  Genome c2 = b;
  std::copy(b.bits.begin() + split, b.bits.end(), c1.bits.begin() + split);
  std::copy(a.bits.begin() + split, a.bits.end(), c2.bits.begin() + split);
  return {std::move(c1), std::move(c2)};
}

void mutate(Genome& g, double pm, SplitMix64& rng) {
  if (pm < 0.0 || pm > 1.0) throw std::invalid_argument("mutate: pm must be in [0, 1]");
  mutate_with_draws(g, pm, [&rng] { return rng.next_unit(); });
}

std::vector<double> evaluate_fitnesses(const Population& pop, const Evaluator& eval) {
  std::vector<double> fitnesses(pop.size());
  parallel_for(pop.size(), [&](size_t i) { fitnesses[i] = fitness_of(eval(pop.members[i])); });
  return fitnesses;
}

GenerationStats summarize(const std::vector<double>& fitnesses) {
  if (fitnesses.empty()) throw std::invalid_argument("summarize: no fitnesses");
  GenerationStats stats;
  stats.best_index = 0;
  double sum = 0.0;
  for (size_t i = 0; i < fitnesses.size(); ++i) {
    sum += fitnesses[i];
    if (fitnesses[i] > fitnesses[stats.best_index]) stats.best_index = i;
  }
  stats.best_fitness = fitnesses[stats.best_index];
  stats.mean_fitness = sum / static_cast<double>(fitnesses.size());
  stats.best_error = stats.best_fitness > 0.0 ? 1.0 / stats.best_fitness : 0.0;
  stats.converged = stats.best_fitness >= kFitnessCap;
  if (stats.converged) stats.best_error = 0.0;
  return stats;
}

Population next_generation(const Population& pop, const GaParams& params,
                           const std::vector<double>& fitnesses) {
  params.validate();
  if (pop.size() == 0) throw std::invalid_argument("next_generation: empty population");
  if (fitnesses.size() != pop.size())
    throw std::invalid_argument("next_generation: fitness count does not match population");
  const size_t m = pop.size();
  const size_t n = pop.members.front().size();
  const std::vector<size_t> survivors = select_above_average(fitnesses);
  const GenerationStats stats = summarize(fitnesses);

  Population next;
  next.generation = pop.generation + 1;
  next.members.resize(m);
  // slot 0 carries the best old member unmodified
  next.members[0] = pop.members[stats.best_index];

  const uint64_t gen = static_cast<uint64_t>(pop.generation);
  size_t slot = 1;
  for (uint64_t pair = 0; slot < m; ++pair) {
    SplitMix64 rng(derive_stream(params.rng_seed, gen, pair, kTagReproduce));
    const Genome& a = pop.members[survivors[rng.next_below(survivors.size())]];
    const Genome& b = pop.members[survivors[rng.next_below(survivors.size())]];
    Genome c1, c2;
    if (n > 1 && rng.next_unit() < params.crossover_rate) {
      const size_t split = 1 + static_cast<size_t>(rng.next_below(n - 1));
      std::tie(c1, c2) = crossover(a, b, split);
    } else {
      c1 = a;
      c2 = b;
    }
    next.members[slot++] = std::move(c1);
    if (slot < m) next.members[slot++] = std::move(c2);
  }

  parallel_for(m - 1, [&](size_t i) {
    const size_t k = i + 1;  // slot 0 is the elite
    SplitMix64 rng(derive_stream(params.rng_seed, gen, k, kTagMutate));
    mutate(next.members[k], params.mutation_rate, rng);
  });
  return next;
}

GenerationResult evolve(const Population& pop, const GaParams& params, const Evaluator& eval) {
  const std::vector<double> fitnesses = evaluate_fitnesses(pop, eval);
  GenerationResult result;
  result.stats = summarize(fitnesses);
  result.next = next_generation(pop, params, fitnesses);
  return result;
}

TrainedModel train(const TrainingSet& set, const NetworkTopology& topology,
                   const WeightCodec& codec, const GaParams& params) {
  params.validate();
  if (set.samples.empty()) throw std::invalid_argument("train: empty training set");
  for (const Sample& s : set.samples) {
    if (static_cast<int>(s.x.size()) != set.inputs ||
        static_cast<int>(s.target.size()) != set.outputs)
      throw std::invalid_argument("train: sample dimensions inconsistent with set");
  }

  const Evaluator eval = [&](const Genome& g) {
    return network_error(topology, decode(g, codec, topology), set);
  };

  const bool wall_stop = params.max_seconds > 0.0;
  const auto started = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  };

  Population pop = init_population(params, codec, topology);
  std::vector<double> errors(pop.size());
  std::vector<double> fitnesses(pop.size());
  auto evaluate = [&] {
    parallel_for(pop.size(), [&](size_t i) {
      errors[i] = eval(pop.members[i]);
      fitnesses[i] = fitness_of(errors[i]);
    });
  };
  evaluate();

  TrainedModel model;
  model.topology = topology;
  model.codec = codec;
  model.seed = params.rng_seed;

  Genome best_genome;
  double best_fitness = -1.0;
  double best_error = 0.0;
  long long cycles = 0;
  for (;;) {
    const GenerationStats stats = summarize(fitnesses);
    if (stats.best_fitness > best_fitness) {
      best_fitness = stats.best_fitness;
      best_error = errors[stats.best_index];
      best_genome = pop.members[stats.best_index];
    }
    model.record.best_fitness_by_cycle.push_back(best_fitness);

    if (best_fitness > params.target_fitness) {
      model.record.stop_reason = StopReason::TargetFitness;
      break;
    }
    if (cycles >= params.max_cycles) {
      model.record.stop_reason = StopReason::MaxCycles;
      break;
    }
    if (wall_stop && elapsed() >= params.max_seconds) {
      model.record.stop_reason = StopReason::MaxTime;
      break;
    }

    pop = next_generation(pop, params, fitnesses);
    evaluate();
    ++cycles;
  }

  model.record.elapsed_cycles = cycles;
  model.record.elapsed_seconds = wall_stop ? elapsed() : 0.0;
  model.record.final_fitness = best_fitness;
  model.record.final_error = best_error;
  model.record.converged = is_converged(best_error);
  model.weights = decode(best_genome, codec, topology);
  return model;
}

}  // namespace textile
