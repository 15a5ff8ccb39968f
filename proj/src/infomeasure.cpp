#include "perccode/infomeasure.hpp"

#include <cmath>
#include <string>

#include "perccode/errors.hpp"

namespace perccode {
namespace {

void require_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("p must lie in [0, 1], got " + format_real(p));
  }
}

// Single pass over generations. pow(0, 0) = 1 keeps the root leaf at p = 0.
ConfigMeasures accumulate(const GenerationTally& tally, double p) {
  ConfigMeasures m;
  double weighted_length = 0.0;
  double weight = 1.0;
  for (std::size_t n = 0; n < tally.leaf_counts.size(); ++n, weight *= p) {
    const auto count = tally.leaf_counts[n];
    if (count == 0) continue;
    m.leaf_total += count;
    m.lambda += static_cast<double>(count) * weight;
    weighted_length += static_cast<double>(n) * static_cast<double>(count) * weight;
  }
  if (m.lambda <= 0.0) return m;
  m.avg_length = weighted_length / m.lambda;

  // H = -sum_n L_n (p^n / Lambda) log2(p^n / Lambda)
  const double log_lambda = std::log2(m.lambda);
  const double log_p = p > 0.0 ? std::log2(p) : 0.0;
  double entropy = 0.0;
  weight = 1.0;
  for (std::size_t n = 0; n < tally.leaf_counts.size(); ++n, weight *= p) {
    const auto count = tally.leaf_counts[n];
    if (count == 0 || weight == 0.0) continue;
    const double prob = weight / m.lambda;
    entropy -= static_cast<double>(count) * prob * (static_cast<double>(n) * log_p - log_lambda);
  }
  m.entropy_bits = entropy > 0.0 ? entropy : 0.0;
  return m;
}

ConfigMeasures require_defined(const GenerationTally& tally, double p) {
  require_probability(p);
  ConfigMeasures m = accumulate(tally, p);
  if (!m.defined()) throw UndefinedError("configuration has no leaves within the depth bound (Lambda = 0)");
  return m;
}

}  // namespace

double normalization(const GenerationTally& tally, double p) {
  require_probability(p);
  return accumulate(tally, p).lambda;
}

double config_entropy(const GenerationTally& tally, double p) {
  return require_defined(tally, p).entropy_bits;
}

double config_avg_length(const GenerationTally& tally, double p) {
  return require_defined(tally, p).avg_length;
}

ConfigMeasures measure(const GenerationTally& tally, double p) {
  require_probability(p);
  return accumulate(tally, p);
}

}  // namespace perccode
