#include "perccode/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "perccode/analytic.hpp"
#include "perccode/errors.hpp"
#include "perccode/infomeasure.hpp"
#include "perccode/percolate.hpp"

namespace perccode {

void RunningStat::add(double x) noexcept {
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (x - mean_);
}

void RunningStat::merge(const RunningStat& other) noexcept {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double n_a = static_cast<double>(count_);
  const double n_b = static_cast<double>(other.count_);
  const double n = n_a + n_b;
  const double delta = other.mean_ - mean_;
  mean_ += delta * n_b / n;
  m2_ += other.m2_ + delta * delta * n_a * n_b / n;
  count_ += other.count_;
}

double RunningStat::variance() const noexcept {
  return count_ < 2 ? 0.0 : m2_ / static_cast<double>(count_ - 1);
}

double RunningStat::std_error() const noexcept {
  return count_ < 2 ? 0.0 : std::sqrt(variance() / static_cast<double>(count_));
}

double EnsembleStats::extinct_frac() const noexcept {
  return samples == 0 ? 0.0 : static_cast<double>(extinct) / static_cast<double>(samples);
}

double EnsembleStats::extinct_std_error() const noexcept {
  if (samples < 2) return 0.0;
  const double f = extinct_frac();
  return std::sqrt(f * (1.0 - f) / static_cast<double>(samples - 1));
}

namespace {

EnsembleStats empty_cell(double p, int depth) {
  EnsembleStats s;
  s.p = p;
  s.depth = depth;
  s.node_counts.resize(static_cast<std::size_t>(depth) + 1);
  s.leaf_counts.resize(static_cast<std::size_t>(depth));
  return s;
}

void fold(EnsembleStats& into, const EnsembleStats& block) {
  into.samples += block.samples;
  into.used += block.used;
  into.skipped_leafless += block.skipped_leafless;
  into.extinct += block.extinct;
  into.final_nodes.merge(block.final_nodes);
  into.lambda.merge(block.lambda);
  into.entropy_bits.merge(block.entropy_bits);
  into.avg_length.merge(block.avg_length);
  for (std::size_t n = 0; n < into.node_counts.size(); ++n) into.node_counts[n].merge(block.node_counts[n]);
  for (std::size_t n = 0; n < into.leaf_counts.size(); ++n) into.leaf_counts[n].merge(block.leaf_counts[n]);
  for (const auto& [k, v] : block.final_node_histogram) into.final_node_histogram[k] += v;
}

EnsembleStats run_block(const ModelParams& params, int depth, std::uint64_t begin, std::uint64_t end,
                        std::uint64_t seed) {
  EnsembleStats block = empty_cell(params.p(), depth);
  for (std::uint64_t i = begin; i < end; ++i) {
    SampleStream stream(seed, i);
    const GenerationTally t = tally(sample_cluster(params, depth, stream));
    const ConfigMeasures m = measure(t, params.p());
    ++block.samples;
    if (!survived(t)) ++block.extinct;
    const std::uint64_t final_count = t.node_counts.back();
    block.final_nodes.add(static_cast<double>(final_count));
    ++block.final_node_histogram[final_count];
    block.lambda.add(m.lambda);
    for (std::size_t n = 0; n < t.node_counts.size(); ++n) block.node_counts[n].add(static_cast<double>(t.node_counts[n]));
    for (std::size_t n = 0; n < t.leaf_counts.size(); ++n) block.leaf_counts[n].add(static_cast<double>(t.leaf_counts[n]));
    if (m.defined()) {
      ++block.used;
      block.entropy_bits.add(m.entropy_bits);
      block.avg_length.add(m.avg_length);
    } else {
      ++block.skipped_leafless;
    }
  }
  return block;
}

template <class F>
std::optional<double> if_defined(F&& f) {
  try {
    return f();
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

}  // namespace

EnsembleStats run_ensemble(const ModelParams& params, int depth, std::uint64_t samples, std::uint64_t seed,
                           unsigned threads) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  if (depth < 0) throw std::invalid_argument("depth must be >= 0");

  const std::uint64_t blocks = (samples + kBlockSize - 1) / kBlockSize;
  std::vector<EnsembleStats> partial(blocks);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t b = next++; b < blocks; b = next++) {
      const std::uint64_t begin = b * kBlockSize;
      partial[b] = run_block(params, depth, begin, std::min(samples, begin + kBlockSize), seed);
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const auto pool_size = static_cast<unsigned>(std::min<std::uint64_t>(threads, blocks));
  if (pool_size <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(pool_size);
    for (unsigned t = 0; t < pool_size; ++t) pool.emplace_back(worker);
  }

  EnsembleStats stats = empty_cell(params.p(), depth);
  for (const EnsembleStats& block : partial) fold(stats, block);

  stats.analytic_entropy_bits = if_defined([&] { return analytic::expected_entropy(params); });
  stats.analytic_code_length = if_defined([&] { return analytic::expected_code_length(params); });
  stats.analytic_lambda = if_defined([&] { return analytic::lambda_mean(params); });
  return stats;
}

void validate(const EnsembleConfig& config) {
  if (config.samples < 1) throw std::invalid_argument("samples must be >= 1");
  for (const double p : config.ps) (void)ModelParams{p};
  for (const int d : config.depths) {
    if (d < 1) throw std::invalid_argument("depths must be >= 1, got " + std::to_string(d));
  }
  if (config.rng_version != kRngVersion) {
    throw std::invalid_argument("unsupported RNG version '" + config.rng_version + "' (this build provides '" +
                                std::string(kRngVersion) + "')");
  }
}

std::vector<EnsembleStats> sweep(const EnsembleConfig& config) {
  validate(config);
  std::ofstream file;
  if (!config.out.empty()) {
    file.open(config.out, std::ios::binary | std::ios::trunc);
    if (!file) throw IOError("cannot open '" + config.out.string() + "' for writing");
  }
  std::vector<EnsembleStats> rows;
  rows.reserve(config.ps.size() * config.depths.size());
  for (const double p : config.ps) {
    const ModelParams params(p);
    for (const int depth : config.depths) {
      rows.push_back(run_ensemble(params, depth, config.samples, config.seed, config.threads));
    }
  }
  if (file.is_open()) {
    write_csv(file, rows, config.rng_version, config.seed);
    file.flush();
    if (!file) throw IOError("failed writing '" + config.out.string() + "'");
  }
  return rows;
}

namespace {

std::string format_optional(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

}  // namespace

void write_csv(std::ostream& out, std::span<const EnsembleStats> rows, std::string_view rng_version,
               std::uint64_t seed) {
  out << "# rng=" << rng_version << " seed=" << seed << '\n' << kCsvHeader << '\n';
  for (const EnsembleStats& r : rows) {
    out << format_real(r.p) << ',' << r.depth << ',' << r.samples << ',' << r.used << ',' << r.skipped_leafless
        << ',' << format_real(r.extinct_frac()) << ',' << format_real(r.final_nodes.mean()) << ','
        << format_real(r.final_nodes.std_error()) << ',' << format_real(r.entropy_bits.mean()) << ','
        << format_real(r.entropy_bits.std_error()) << ',' << format_real(r.avg_length.mean()) << ','
        << format_real(r.avg_length.std_error()) << ',' << format_optional(r.analytic_entropy_bits) << ','
        << format_optional(r.analytic_code_length) << ',' << format_optional(r.analytic_lambda) << '\n';
  }
}

}  // namespace perccode
