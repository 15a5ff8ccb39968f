#pragma once

// Information content of one cluster under the Bernoulli measure: a leaf at
// generation n carries weight p^n, normalised by Lambda = sum_n L_n p^n.
// Everything here depends on the per-generation leaf counts only.

#include <cstdint>

#include "perccode/percolate.hpp"

namespace perccode {

struct ConfigMeasures {
  double lambda = 0.0;
  double entropy_bits = 0.0;  // meaningful only when lambda > 0
  double avg_length = 0.0;    // meaningful only when lambda > 0
  std::uint64_t leaf_total = 0;

  bool defined() const noexcept { return lambda > 0.0; }
};

/// Lambda = sum_{n < D} L_n p^n; zero for leafless tallies.
double normalization(const GenerationTally& tally, double p);

/// Shannon entropy (bits) of the normalised leaf distribution.
/// Throws UndefinedError when Lambda = 0.
double config_entropy(const GenerationTally& tally, double p);

/// sum_n n L_n p^n / Lambda. Throws UndefinedError when Lambda = 0.
double config_avg_length(const GenerationTally& tally, double p);

/// All three at once; entropy and length are left at 0 when Lambda = 0.
ConfigMeasures measure(const GenerationTally& tally, double p);

}  // namespace perccode
