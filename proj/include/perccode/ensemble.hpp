#pragma once

// Monte Carlo ensembles of root clusters.
//
// Sample i of a cell always uses SampleStream(seed, i), and per-sample
// results are folded in fixed blocks of kBlockSize indices that are merged in
// index order. Results therefore do not depend on the worker count.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "perccode/params.hpp"
#include "perccode/rng.hpp"

namespace perccode {

/// Welford accumulator with Chan's pairwise merge.
class RunningStat {
 public:
  void add(double x) noexcept;
  void merge(const RunningStat& other) noexcept;

  std::uint64_t count() const noexcept { return count_; }
  double mean() const noexcept { return mean_; }
  /// Unbiased sample variance; 0 with fewer than two values.
  double variance() const noexcept;
  /// Sample standard deviation / sqrt(count); 0 with fewer than two values.
  double std_error() const noexcept;

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct EnsembleStats {
  double p = 0.0;
  int depth = 0;
  std::uint64_t samples = 0;
  std::uint64_t used = 0;              // samples with Lambda > 0
  std::uint64_t skipped_leafless = 0;  // samples with Lambda = 0
  std::uint64_t extinct = 0;           // samples not reaching the depth bound

  RunningStat final_nodes;   // N_depth over all samples
  RunningStat lambda;        // Lambda over all samples
  RunningStat entropy_bits;  // over used samples
  RunningStat avg_length;    // over used samples
  std::vector<RunningStat> node_counts;  // N_n, n = 0..depth
  std::vector<RunningStat> leaf_counts;  // L_n, n = 0..depth-1
  std::map<std::uint64_t, std::uint64_t> final_node_histogram;

  std::optional<double> analytic_entropy_bits;
  std::optional<double> analytic_code_length;
  std::optional<double> analytic_lambda;

  double extinct_frac() const noexcept;
  double extinct_std_error() const noexcept;
};

inline constexpr std::uint64_t kBlockSize = 1024;

/// Draws `samples` clusters with streams (seed, 0..samples-1). `threads` = 0
/// picks the hardware concurrency. Throws std::invalid_argument when
/// samples < 1 or depth < 0.
EnsembleStats run_ensemble(const ModelParams& params, int depth, std::uint64_t samples, std::uint64_t seed,
                           unsigned threads = 1);

struct EnsembleConfig {
  std::vector<double> ps;
  std::vector<int> depths;
  std::uint64_t samples = 10000;
  std::uint64_t seed = kDefaultSeed;
  std::filesystem::path out;  // empty: no file written
  std::string rng_version{kRngVersion};
  unsigned threads = 1;
};

/// Throws std::invalid_argument / DomainError on an invalid config.
void validate(const EnsembleConfig& config);

/// One row per (p, depth), p-major. Writes CSV to config.out when set;
/// throws IOError if it cannot be opened.
std::vector<EnsembleStats> sweep(const EnsembleConfig& config);

inline constexpr const char* kCsvHeader =
    "p,depth,samples,used,skipped_leafless,extinct_frac,mean_N_final,se_N_final,mean_H_bits,se_H_bits,"
    "mean_L,se_L,analytic_H_bits,analytic_L,analytic_lambda";

/// First line `# rng=<tag> seed=<seed>`, then the header and one line per row.
/// Reals use the shortest round-trip form; out-of-domain analytic cells are empty.
void write_csv(std::ostream& out, std::span<const EnsembleStats> rows, std::string_view rng_version,
               std::uint64_t seed);

}  // namespace perccode
