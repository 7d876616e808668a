#pragma once

#include <cstdint>
#include <vector>

#include "textile/rng.hpp"

namespace textile {

// Fixed-length bit string encoding one full weight set. One byte per bit,
// values restricted to {0, 1}.
struct Genome {
  std::vector<uint8_t> bits;

  size_t size() const { return bits.size(); }
  bool operator==(const Genome&) const = default;
};

// Three-layer feedforward sizes. The weight count it implies is what the
// codec multiplies out to the genome length.
struct NetworkTopology {
  int input_units = 4;
  int hidden_units = 48;
  int output_units = 6;
  bool bias = true;  // one extra weight per non-input unit

  int weight_count() const;
  void validate() const;  // throws std::invalid_argument
};

// Fixed-point map from bit groups to weights strictly inside (-1, 1):
// a group of `bits_per_weight` bits read MSB-first as unsigned u becomes
// ((u + 0.5) / 2^b) * 2 - 1.
struct WeightCodec {
  int bits_per_weight = 16;

  void validate() const;  // bits_per_weight must be in [4, 32]
  size_t genome_bits(const NetworkTopology& topology) const;
  double decode_group(uint64_t u) const;
};

// Decodes a genome into weights ordered layer by layer, unit by unit, with
// the bias last within each unit. Throws std::invalid_argument when the
// genome length does not match bits_per_weight * weight_count.
std::vector<double> decode(const Genome& genome, const WeightCodec& codec,
                           const NetworkTopology& topology);

Genome random_genome(size_t bit_count, SplitMix64& rng);

}  // namespace textile
