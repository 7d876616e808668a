#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "textile/experiments.hpp"

using namespace textile;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "textile_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// small separable set so sweep cells finish in a few cycles
FeatureSet tiny_set() {
  FeatureSet set;
  for (int i = 0; i < 18; ++i) {
    const auto cls = static_cast<DefectClass>(i % kClassCount);
    ScaledFeatures f;
    f.h = static_cast<int>(cls) * 16.0 + 1.0;
    f.w = 100.0 - f.h;
    set.features.push_back(f);
    set.labels.push_back(cls);
  }
  return set;
}

GaParams tiny_params() {
  GaParams p;
  p.population_size = 16;
  p.max_cycles = 5;
  p.max_seconds = 0.0;
  p.rng_seed = 7;
  return p;
}

const NetworkTopology kTinyTopology{4, 4, 6, true};
const WeightCodec kTinyCodec{8};

}  // namespace

TEST_CASE("default sweep lists match the tuned tables") {
  CHECK(default_population_sizes() ==
        std::vector<long long>{64, 128, 256, 512, 1024, 2048, 4096, 8192, 10000});
  CHECK(default_crossover_rates() == std::vector<double>{0.99, 0.9, 0.8, 0.7, 0.6, 0.5});
  CHECK(default_mutation_rates_low() ==
        std::vector<double>{0.001, 0.0025, 0.004, 0.0055, 0.007, 0.0085, 0.01});
  CHECK(default_mutation_rates_high() == std::vector<double>{0.01, 0.1, 0.2, 0.3, 0.4, 0.5});
}

TEST_CASE("hidden width schedule steps by two then by one") {
  CHECK(hidden_width_schedule(30, 2, 8) ==
        std::vector<int>{30, 28, 26, 24, 22, 20, 18, 16, 14, 12, 10, 9, 8});
  CHECK(hidden_width_schedule(12, 2, 12) == std::vector<int>{12});
  CHECK(hidden_width_schedule(6, 3, 2) == std::vector<int>{6, 3, 2});
  CHECK_THROWS_AS(hidden_width_schedule(8, 2, 30), std::invalid_argument);
  CHECK_THROWS_AS(hidden_width_schedule(8, 0, 4), std::invalid_argument);
  CHECK_THROWS_AS(hidden_width_schedule(8, 2, 0), std::invalid_argument);
}

TEST_CASE("sweeps vary exactly one parameter per report") {
  const auto set = tiny_set();

  const auto pop_rows = sweep_population(set, {8, 16, 32}, kTinyTopology, kTinyCodec,
                                         tiny_params());
  REQUIRE(pop_rows.size() == 3);
  CHECK(pop_rows[0].m == 8);
  CHECK(pop_rows[2].m == 32);
  for (const auto& r : pop_rows) {
    CHECK(r.pc == tiny_params().crossover_rate);
    CHECK(r.pm == tiny_params().mutation_rate);
    CHECK(r.hidden_units == kTinyTopology.hidden_units);
    CHECK(r.cycle_limit == 5);
    CHECK(r.elapsed_seconds == 0.0);  // wall-clock stop disabled
  }

  const auto pc_rows =
      sweep_crossover(set, {0.9, 0.5}, kTinyTopology, kTinyCodec, tiny_params());
  REQUIRE(pc_rows.size() == 2);
  CHECK(pc_rows[0].pc == 0.9);
  CHECK(pc_rows[1].pc == 0.5);
  for (const auto& r : pc_rows) CHECK(r.m == tiny_params().population_size);

  CHECK_THROWS_AS(sweep_crossover(set, {1.5}, kTinyTopology, kTinyCodec, tiny_params()),
                  std::invalid_argument);
  CHECK_THROWS_AS(sweep_population(set, {}, kTinyTopology, kTinyCodec, tiny_params()),
                  std::invalid_argument);
}

TEST_CASE("mutation sweep dedups and sorts ascending") {
  const auto set = tiny_set();
  const auto rows = sweep_mutation(set, {0.2, 0.01, 0.2, 0.05}, kTinyTopology, kTinyCodec,
                                   tiny_params());
  REQUIRE(rows.size() == 3);  // duplicate 0.2 dropped
  CHECK(rows[0].pm == 0.01);
  CHECK(rows[1].pm == 0.05);
  CHECK(rows[2].pm == 0.2);

  CHECK_THROWS_AS(sweep_mutation(set, {-0.1}, kTinyTopology, kTinyCodec, tiny_params()),
                  std::invalid_argument);
}

TEST_CASE("prune trains one row per scheduled width") {
  const auto set = tiny_set();
  const auto result = prune_hidden(set, 6, 2, 3, kTinyTopology, kTinyCodec, tiny_params());
  REQUIRE(result.rows.size() == 3);  // widths 6, 4, 3
  CHECK(result.rows[0].hidden_units == 6);
  CHECK(result.rows[1].hidden_units == 4);
  CHECK(result.rows[2].hidden_units == 3);
  REQUIRE(result.models.size() == 3);
  for (size_t i = 0; i < result.models.size(); ++i) {
    const auto& model = result.models[i];
    CHECK(model.topology.hidden_units == result.rows[i].hidden_units);
    // weight count stays consistent with the genome codec
    CHECK(model.weights.size() == static_cast<size_t>(model.topology.weight_count()));
  }
}

TEST_CASE("reports round-trip exactly and re-emit identical bytes") {
  const auto set = tiny_set();
  const auto rows = sweep_population(set, {8, 16}, kTinyTopology, kTinyCodec, tiny_params());

  const auto path_a = temp_file("report_a.csv");
  const auto path_b = temp_file("report_b.csv");
  emit_report(rows, path_a);
  emit_report(rows, path_b);
  CHECK(file_bytes(path_a) == file_bytes(path_b));

  const auto parsed = parse_report(path_a);
  CHECK(parsed == rows);

  const auto path_c = temp_file("report_c.csv");
  emit_report(parsed, path_c);
  CHECK(file_bytes(path_c) == file_bytes(path_a));

  CHECK_THROWS_AS(emit_report({}, path_a), std::invalid_argument);
  CHECK_THROWS_AS(emit_report(rows, "/nonexistent_dir_zz/report.csv"), IoError);
  CHECK_THROWS_AS(parse_report(temp_file("missing_report.csv")), IoError);
}

TEST_CASE("fitness cells carry both the fraction and the decimal") {
  SweepRow row;
  row.input_units = 4;
  row.hidden_units = 4;
  row.output_units = 6;
  row.pc = 0.99;
  row.pm = 0.01;
  row.m = 16;
  row.error = 7.0;
  row.fitness = 1.0 / 7.0;
  row.elapsed_cycles = 5;
  row.cycle_limit = 5;
  row.stop_reason = "max_cycles";
  row.accuracy_pct = 50.0;

  const auto path = temp_file("fitness_cell.csv");
  emit_report({row}, path);
  std::ifstream in(path);
  std::string header, line;
  std::getline(in, header);
  std::getline(in, line);
  CHECK(header.rfind("input,hidden,output,Pc,Pm,M,E,F,", 0) == 0);
  CHECK(line.find("1/7=0.14285714285714285") != std::string::npos);
  CHECK(line.find(",0.99,0.01,") != std::string::npos);
}
