#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "perccode/analytic.hpp"
#include "perccode/ensemble.hpp"
#include "perccode/errors.hpp"
#include "perccode/oracle.hpp"

using namespace perccode;

namespace {

std::string csv_of(const EnsembleConfig& config) {
  const auto rows = sweep(config);
  std::ostringstream s;
  write_csv(s, rows, config.rng_version, config.seed);
  return s.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("RunningStat merge equals sequential accumulation") {
  std::mt19937_64 gen(11);
  std::normal_distribution<double> dist(3.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> xs(1 + gen() % 200);
    for (auto& x : xs) x = dist(gen);
    const std::size_t cut = gen() % (xs.size() + 1);
    RunningStat all, left, right;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      all.add(xs[i]);
      (i < cut ? left : right).add(xs[i]);
    }
    left.merge(right);
    CHECK(left.count() == all.count());
    CHECK(left.mean() == doctest::Approx(all.mean()).epsilon(1e-12));
    CHECK(left.variance() == doctest::Approx(all.variance()).epsilon(1e-10));

    double mean = 0.0;
    for (const double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (const double x : xs) ss += (x - mean) * (x - mean);
    CHECK(all.mean() == doctest::Approx(mean).epsilon(1e-12));
    if (xs.size() > 1) {
      const double var = ss / static_cast<double>(xs.size() - 1);
      CHECK(all.variance() == doctest::Approx(var).epsilon(1e-10));
      CHECK(all.std_error() == doctest::Approx(std::sqrt(var / static_cast<double>(xs.size()))).epsilon(1e-10));
    }
  }
  RunningStat empty;
  CHECK(empty.variance() == 0.0);
  CHECK(empty.std_error() == 0.0);
}

TEST_CASE("p = 0 ensembles are root-only") {
  const EnsembleStats s = run_ensemble(ModelParams(0.0), 8, 100, kDefaultSeed);
  CHECK(s.used == 100);
  CHECK(s.skipped_leafless == 0);
  CHECK(s.entropy_bits.mean() == 0.0);
  CHECK(s.avg_length.mean() == 0.0);
  CHECK(s.lambda.mean() == 1.0);
  CHECK(s.lambda.variance() == 0.0);
  CHECK(s.node_counts[0].mean() == 1.0);
  for (int n = 1; n <= 8; ++n) CHECK(s.node_counts[n].mean() == 0.0);
  CHECK(s.extinct == 100);
}

TEST_CASE("p = 1 ensembles are all leafless") {
  const EnsembleStats s = run_ensemble(ModelParams(1.0), 8, 100, kDefaultSeed);
  CHECK(s.used == 0);
  CHECK(s.skipped_leafless == 100);
  CHECK(s.entropy_bits.mean() == 0.0);
  CHECK(s.avg_length.mean() == 0.0);
  CHECK(s.final_nodes.mean() == 256.0);
  CHECK(s.extinct == 0);

  std::ostringstream csv;
  write_csv(csv, std::span(&s, 1), kRngVersion, kDefaultSeed);
  const auto lines = lines_of(csv.str());
  REQUIRE(lines.size() == 3);
  // Every analytic series diverges at p = 1.
  CHECK(lines[2] == "1,8,100,0,100,0,256,0,0,0,0,0,,,");
}

TEST_CASE("counters and analytic columns") {
  for (const double p : {0.3, 0.5, 0.6, 0.65}) {
    const EnsembleStats s = run_ensemble(ModelParams(p), 10, 3000, 5);
    CHECK(s.used + s.skipped_leafless == s.samples);
    CHECK(s.entropy_bits.count() == s.used);
    CHECK(s.node_counts.size() == 11);
    CHECK(s.leaf_counts.size() == 10);
    std::uint64_t histogram_total = 0;
    for (const auto& [k, v] : s.final_node_histogram) histogram_total += v;
    CHECK(histogram_total == s.samples);
    CHECK(s.analytic_lambda.has_value() == analytic::lambda_converges(ModelParams(p)));
    if (s.analytic_code_length) {
      CHECK(*s.analytic_code_length == analytic::expected_code_length(ModelParams(p)));
    }
  }
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(run_ensemble(ModelParams(0.5), 4, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(run_ensemble(ModelParams(0.5), -1, 10, 1), std::invalid_argument);

  EnsembleConfig bad_depth;
  bad_depth.ps = {0.5};
  bad_depth.depths = {0};
  CHECK_THROWS(validate(bad_depth));
  EnsembleConfig bad_p;
  bad_p.ps = {1.5};
  bad_p.depths = {3};
  CHECK_THROWS(validate(bad_p));
  EnsembleConfig bad_samples;
  bad_samples.ps = {0.5};
  bad_samples.depths = {3};
  bad_samples.samples = 0;
  CHECK_THROWS(validate(bad_samples));
}

TEST_CASE("empty p-list gives a header-only CSV") {
  EnsembleConfig config;
  config.depths = {4};
  const auto rows = sweep(config);
  CHECK(rows.empty());
  const auto lines = lines_of(csv_of(config));
  REQUIRE(lines.size() == 2);
  CHECK(lines[0].starts_with("# rng="));
  CHECK(lines[1] == kCsvHeader);
}

TEST_CASE("sweep writes the file and rejects unwritable paths") {
  EnsembleConfig config;
  config.ps = {0.4, 0.6};
  config.depths = {3, 5};
  config.samples = 500;
  const auto path = std::filesystem::temp_directory_path() / "perccode_test_sweep.csv";
  config.out = path;
  const auto rows = sweep(config);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].p == 0.4);
  CHECK(rows[0].depth == 3);
  CHECK(rows[1].depth == 5);
  CHECK(rows[2].p == 0.6);
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  std::ostringstream expected;
  write_csv(expected, rows, config.rng_version, config.seed);
  CHECK(text.str() == expected.str());
  std::filesystem::remove(path);

  config.out = "/nonexistent-dir/perccode/out.csv";
  CHECK_THROWS_AS(sweep(config), IOError);
}

TEST_CASE("results do not depend on the thread count") {
  EnsembleConfig config;
  config.ps = {0.5, 0.6};
  config.depths = {6, 9};
  config.samples = 5000;
  config.threads = 1;
  const std::string one = csv_of(config);
  config.threads = 4;
  const std::string four = csv_of(config);
  config.threads = 0;
  const std::string all = csv_of(config);
  CHECK(one == four);
  CHECK(one == all);
  config.seed += 1;
  CHECK(csv_of(config) != one);
}

TEST_CASE("mean code length at p = 1/2 is non-decreasing in depth and bounded") {
  EnsembleConfig config;
  config.ps = {0.5};
  config.depths = {7, 12, 16};
  config.samples = 10000;
  config.threads = 0;
  const auto rows = sweep(config);
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double slack = 3 * std::hypot(rows[i].avg_length.std_error(), rows[i - 1].avg_length.std_error());
    CHECK(rows[i].avg_length.mean() + slack >= rows[i - 1].avg_length.mean());
  }
  CHECK(rows.back().avg_length.mean() < 16.0);
}

TEST_CASE("per-generation leaf means agree with q^2 (2p)^n") {
  for (const double p : {0.5, 0.6}) {
    const ModelParams m(p);
    const int depth = 10;
    const EnsembleStats s = run_ensemble(m, depth, 40000, 99, 0);
    for (int n = 0; n < depth; ++n) {
      const double expected = analytic::leaf_moments(m, n).mean;
      const auto& r = s.leaf_counts[n];
      CHECK_MESSAGE(std::abs(r.mean() - expected) <= 3 * r.std_error() + 1e-12,
                    "p=" << p << " n=" << n << " mean=" << r.mean() << " expected=" << expected);
    }
  }
}

TEST_CASE("final-generation histogram is close to the exact distribution") {
  const ModelParams m(0.5);
  const EnsembleStats s = run_ensemble(m, 8, 200000, kDefaultSeed, 0);
  const auto exact = oracle::node_distribution(m, 8).probabilities;
  double tv = 0.0;
  for (std::size_t k = 0; k < exact.size(); ++k) {
    const auto it = s.final_node_histogram.find(k);
    const double freq = it == s.final_node_histogram.end() ? 0.0 : static_cast<double>(it->second) / 200000.0;
    tv += std::abs(freq - exact[k]);
  }
  tv /= 2;
  CHECK(tv <= 0.01);
}

TEST_CASE("extinction frequency matches the PGF iterate") {
  const ModelParams m(0.6);
  const EnsembleStats s = run_ensemble(m, 16, 100000, kDefaultSeed, 0);
  const double expected = analytic::pgf_iterate(m, 16, 0.0);
  CHECK(std::abs(s.extinct_frac() - expected) <= 3 * s.extinct_std_error());
}
