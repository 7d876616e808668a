#include "textile/experiments.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>

#include "textile/text.hpp"

namespace textile {

std::vector<long long> default_population_sizes() {
  return {64, 128, 256, 512, 1024, 2048, 4096, 8192, 10000};
}

std::vector<double> default_crossover_rates() { return {0.99, 0.9, 0.8, 0.7, 0.6, 0.5}; }

std::vector<double> default_mutation_rates_low() {
  return {0.001, 0.0025, 0.004, 0.0055, 0.007, 0.0085, 0.01};
}

std::vector<double> default_mutation_rates_high() { return {0.01, 0.1, 0.2, 0.3, 0.4, 0.5}; }

SweepRow run_cell(const FeatureSet& set, const NetworkTopology& topology,
                  const WeightCodec& codec, const GaParams& params) {
  const SplitPlan split = make_split(set.labels, 0);
  const TrainedModel model =
      train(to_training_set(set, split.train_ids), topology, codec, params);

  SweepRow row;
  row.input_units = topology.input_units;
  row.hidden_units = topology.hidden_units;
  row.output_units = topology.output_units;
  row.pc = params.crossover_rate;
  row.pm = params.mutation_rate;
  row.m = params.population_size;
  row.error = model.record.final_error;
  row.fitness = model.record.final_fitness;
  row.converged = model.record.converged;
  row.elapsed_cycles = model.record.elapsed_cycles;
  row.cycle_limit = params.max_cycles;
  row.elapsed_seconds = model.record.elapsed_seconds;
  row.stop_reason = stop_reason_name(model.record.stop_reason);
  row.accuracy_pct = evaluate_accuracy_pct(topology, model.weights, set);
  return row;
}

std::vector<SweepRow> sweep_population(const FeatureSet& set, const std::vector<long long>& sizes,
                                       const NetworkTopology& topology, const WeightCodec& codec,
                                       const GaParams& base) {
  if (sizes.empty()) throw std::invalid_argument("sweep_population: empty size list");
  std::vector<SweepRow> rows;
  for (size_t i = 0; i < sizes.size(); ++i) {
    GaParams params = base;
    params.population_size = sizes[i];
    params.rng_seed = base.rng_seed + i;
    rows.push_back(run_cell(set, topology, codec, params));
  }
  return rows;
}

std::vector<SweepRow> sweep_crossover(const FeatureSet& set, const std::vector<double>& rates,
                                      const NetworkTopology& topology, const WeightCodec& codec,
                                      const GaParams& base) {
  if (rates.empty()) throw std::invalid_argument("sweep_crossover: empty rate list");
  for (double pc : rates) {
    if (pc < 0.0 || pc > 1.0)
      throw std::invalid_argument("sweep_crossover: rate outside [0, 1]");
  }
  std::vector<SweepRow> rows;
  for (size_t i = 0; i < rates.size(); ++i) {
    GaParams params = base;
    params.crossover_rate = rates[i];
    params.rng_seed = base.rng_seed + i;
    rows.push_back(run_cell(set, topology, codec, params));
  }
  return rows;
}

std::vector<SweepRow> sweep_mutation(const FeatureSet& set, const std::vector<double>& rates,
                                     const NetworkTopology& topology, const WeightCodec& codec,
                                     const GaParams& base) {
  if (rates.empty()) throw std::invalid_argument("sweep_mutation: empty rate list");
  for (double pm : rates) {
    if (pm < 0.0 || pm > 1.0) throw std::invalid_argument("sweep_mutation: rate outside [0, 1]");
  }
  std::vector<double> unique = rates;
  std::sort(unique.begin(), unique.end());
  const auto last = std::unique(unique.begin(), unique.end());
  if (last != unique.end()) {
    std::cerr << "sweep_mutation: dropping " << (unique.end() - last)
              << " duplicate rate(s)\n";
    unique.erase(last, unique.end());
  }
  std::vector<SweepRow> rows;
  for (size_t i = 0; i < unique.size(); ++i) {
    GaParams params = base;
    params.mutation_rate = unique[i];
    params.rng_seed = base.rng_seed + i;
    rows.push_back(run_cell(set, topology, codec, params));
  }
  return rows;
}

std::vector<int> hidden_width_schedule(int start, int step, int stop) {
  if (stop < 1 || start < stop) throw std::invalid_argument("schedule: need start >= stop >= 1");
  if (step < 1) throw std::invalid_argument("schedule: step must be >= 1");
  std::vector<int> widths;
  int w = start;
  for (;;) {
    widths.push_back(w);
    if (w == stop) break;
    w = (w - step > stop) ? w - step : w - 1;
  }
  return widths;
}

PruneResult prune_hidden(const FeatureSet& set, int start, int step, int stop,
                         const NetworkTopology& base, const WeightCodec& codec,
                         const GaParams& params) {
  const std::vector<int> widths = hidden_width_schedule(start, step, stop);
  const SplitPlan split = make_split(set.labels, 0);
  const TrainingSet training = to_training_set(set, split.train_ids);

  PruneResult result;
  for (size_t i = 0; i < widths.size(); ++i) {
    NetworkTopology topology = base;
    topology.hidden_units = widths[i];
    GaParams cell = params;
    cell.rng_seed = params.rng_seed + i;
    TrainedModel model = train(training, topology, codec, cell);

    SweepRow row;
    row.input_units = topology.input_units;
    row.hidden_units = topology.hidden_units;
    row.output_units = topology.output_units;
    row.pc = cell.crossover_rate;
    row.pm = cell.mutation_rate;
    row.m = cell.population_size;
    row.error = model.record.final_error;
    row.fitness = model.record.final_fitness;
    row.converged = model.record.converged;
    row.elapsed_cycles = model.record.elapsed_cycles;
    row.cycle_limit = cell.max_cycles;
    row.elapsed_seconds = model.record.elapsed_seconds;
    row.stop_reason = stop_reason_name(model.record.stop_reason);
    row.accuracy_pct = evaluate_accuracy_pct(topology, model.weights, set);
    result.rows.push_back(std::move(row));
    result.models.push_back(std::move(model));
  }
  return result;
}

namespace {

constexpr const char* kReportHeader =
    "input,hidden,output,Pc,Pm,M,E,F,elapsed_cycles,cycle_limit,elapsed_seconds,stop_reason,"
    "accuracy_pct";

std::string fitness_cell(const SweepRow& row) {
  if (row.converged) return "converged=" + format_double(row.fitness);
  return "1/" + format_double(row.error) + "=" + format_double(row.fitness);
}

}  // namespace

void emit_report(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
  if (rows.empty()) throw std::invalid_argument("emit_report: no rows");
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out << kReportHeader << "\n";
  for (const SweepRow& r : rows) {
    out << r.input_units << "," << r.hidden_units << "," << r.output_units << ","
        << format_double(r.pc) << "," << format_double(r.pm) << "," << r.m << ","
        << format_double(r.error) << "," << fitness_cell(r) << "," << r.elapsed_cycles << ","
        << r.cycle_limit << "," << format_double(r.elapsed_seconds) << "," << r.stop_reason << ","
        << format_double(r.accuracy_pct) << "\n";
  }
  if (!out) throw IoError(path.string() + ": write failed");
}

std::vector<SweepRow> parse_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  std::string line;
  if (!std::getline(in, line) || line != kReportHeader)
    throw IoError(path.string() + ": unexpected report header");

  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 13) throw IoError(path.string() + ": malformed row '" + line + "'");
    SweepRow r;
    r.input_units = static_cast<int>(parse_int(cells[0]));
    r.hidden_units = static_cast<int>(parse_int(cells[1]));
    r.output_units = static_cast<int>(parse_int(cells[2]));
    r.pc = parse_double(cells[3]);
    r.pm = parse_double(cells[4]);
    r.m = parse_int(cells[5]);
    r.error = parse_double(cells[6]);
    const std::string& f = cells[7];
    const auto eq = f.rfind('=');
    if (eq == std::string::npos) throw IoError(path.string() + ": malformed fitness cell");
    r.converged = f.rfind("converged=", 0) == 0;
    r.fitness = parse_double(f.substr(eq + 1));
    r.elapsed_cycles = parse_int(cells[8]);
    r.cycle_limit = parse_int(cells[9]);
    r.elapsed_seconds = parse_double(cells[10]);
    r.stop_reason = cells[11];
    r.accuracy_pct = parse_double(cells[12]);
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw IoError(path.string() + ": no rows");
  return rows;
}

}  // namespace textile
