#include "textile/genome.hpp"

#include <stdexcept>

namespace textile {

int NetworkTopology::weight_count() const {
  const int per_hidden = input_units + (bias ? 1 : 0);
  const int per_output = hidden_units + (bias ? 1 : 0);
  return hidden_units * per_hidden + output_units * per_output;
}

void NetworkTopology::validate() const {
  if (input_units < 1 || hidden_units < 1 || output_units < 1)
    throw std::invalid_argument("topology: every layer needs at least one unit");
}

void WeightCodec::validate() const {
  if (bits_per_weight < 4 || bits_per_weight > 32)
    throw std::invalid_argument("codec: bits_per_weight must be in [4, 32]");
}

size_t WeightCodec::genome_bits(const NetworkTopology& topology) const {
  validate();
  topology.validate();
  return static_cast<size_t>(bits_per_weight) * topology.weight_count();
}

double WeightCodec::decode_group(uint64_t u) const {
  const double cells = static_cast<double>(uint64_t{1} << bits_per_weight);
  return (static_cast<double>(u) + 0.5) / cells * 2.0 - 1.0;
}

std::vector<double> decode(const Genome& genome, const WeightCodec& codec,
                           const NetworkTopology& topology) {
  const size_t expected = codec.genome_bits(topology);
  if (genome.size() != expected)
    throw std::invalid_argument("decode: genome length does not match codec and topology");

  std::vector<double> weights(topology.weight_count());
  const uint8_t* bit = genome.bits.data();
  for (double& w : weights) {
    uint64_t u = 0;
    for (int k = 0; k < codec.bits_per_weight; ++k) u = (u << 1) | *bit++;
    w = codec.decode_group(u);
  }
  return weights;
}

Genome random_genome(size_t bit_count, SplitMix64& rng) {
  Genome g;
  g.bits.resize(bit_count);
  for (uint8_t& b : g.bits) b = static_cast<uint8_t>(rng.next() >> 63);
  return g;
}

}  // namespace textile
