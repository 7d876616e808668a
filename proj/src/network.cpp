#include "textile/network.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "textile/errors.hpp"

namespace textile {

void forward_into(const NetworkTopology& topology, std::span<const double> weights,
                  std::span<const double> x, std::span<uint8_t> hidden,
                  std::span<uint8_t> outputs) {
  const double* w = weights.data();
  for (int j = 0; j < topology.hidden_units; ++j) {
    double sum = 0.0;
    for (int i = 0; i < topology.input_units; ++i) sum += *w++ * x[i];
    if (topology.bias) sum += *w++;
    hidden[j] = step(sum);
  }
  for (int k = 0; k < topology.output_units; ++k) {
    double sum = 0.0;
    for (int j = 0; j < topology.hidden_units; ++j) {
      if (hidden[j]) sum += w[j];
    }
    w += topology.hidden_units;
    if (topology.bias) sum += *w++;
    outputs[k] = step(sum);
  }
}

std::vector<uint8_t> forward(const NetworkTopology& topology, std::span<const double> weights,
                             std::span<const double> x) {
  topology.validate();
  if (static_cast<int>(x.size()) != topology.input_units)
    throw std::invalid_argument("forward: input dimension mismatch");
  if (static_cast<int>(weights.size()) != topology.weight_count())
    throw std::invalid_argument("forward: weight count mismatch");

  std::vector<uint8_t> hidden(topology.hidden_units);
  std::vector<uint8_t> outputs(topology.output_units);
  forward_into(topology, weights, x, hidden, outputs);
  return outputs;
}

std::optional<DefectClass> classify(std::span<const uint8_t> outputs) {
  if (outputs.size() != static_cast<size_t>(kClassCount))
    throw std::invalid_argument("classify: expected one output per class");
  int fired = -1;
  for (int i = 0; i < kClassCount; ++i) {
    if (!outputs[i]) continue;
    if (fired >= 0) return std::nullopt;  // ambiguous
    fired = i;
  }
  if (fired < 0) return std::nullopt;  // nothing fired
  return static_cast<DefectClass>(fired);
}

namespace {
const std::array<std::string, 3> kStopNames = {"target_fitness", "max_cycles", "max_time"};
constexpr const char* kModelMagic = "textile-gann-model";
constexpr int kModelVersion = 1;
}  // namespace

const std::string& stop_reason_name(StopReason r) {
  return kStopNames[static_cast<int>(r)];
}

StopReason parse_stop_reason(const std::string& name) {
  for (size_t i = 0; i < kStopNames.size(); ++i) {
    if (kStopNames[i] == name) return static_cast<StopReason>(i);
  }
  throw std::invalid_argument("parse_stop_reason: unknown reason '" + name + "'");
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  if (static_cast<int>(model.weights.size()) != model.topology.weight_count())
    throw std::invalid_argument("save_model: weight count does not match topology");
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");

  out << kModelMagic << " v" << kModelVersion << "\n";
  out << "topology " << model.topology.input_units << " " << model.topology.hidden_units << " "
      << model.topology.output_units << " bias=" << (model.topology.bias ? 1 : 0) << "\n";
  out << "bits_per_weight " << model.codec.bits_per_weight << "\n";
  out << "seed " << model.seed << "\n";
  out << "stop_reason " << stop_reason_name(model.record.stop_reason) << "\n";
  out << "weights " << model.weights.size() << "\n";
  char buf[64];
  for (double w : model.weights) {
    std::snprintf(buf, sizeof(buf), "%.17g", w);
    out << buf << "\n";
  }
  if (!out) throw IoError(path.string() + ": write failed");
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  auto bad = [&](const std::string& what) -> IoError {
    return IoError(path.string() + ": " + what);
  };

  std::string magic, version;
  if (!(in >> magic >> version) || magic != kModelMagic || version != "v1")
    throw bad("not a recognized model file");

  TrainedModel model;
  std::string key, biasField, reason;
  size_t count = 0;
  if (!(in >> key >> model.topology.input_units >> model.topology.hidden_units >>
        model.topology.output_units >> biasField) ||
      key != "topology")
    throw bad("malformed topology line");
  if (biasField == "bias=1")
    model.topology.bias = true;
  else if (biasField == "bias=0")
    model.topology.bias = false;
  else
    throw bad("malformed bias field");
  if (!(in >> key >> model.codec.bits_per_weight) || key != "bits_per_weight")
    throw bad("malformed bits_per_weight line");
  if (!(in >> key >> model.seed) || key != "seed") throw bad("malformed seed line");
  if (!(in >> key >> reason) || key != "stop_reason") throw bad("malformed stop_reason line");
  model.record.stop_reason = parse_stop_reason(reason);
  if (!(in >> key >> count) || key != "weights") throw bad("malformed weights line");

  model.topology.validate();
  model.codec.validate();
  if (count != static_cast<size_t>(model.topology.weight_count()))
    throw bad("weight count does not match topology");

  model.weights.resize(count);
  for (double& w : model.weights) {
    if (!(in >> w)) throw bad("truncated weight list");
  }
  return model;
}

}  // namespace textile
