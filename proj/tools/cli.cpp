#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "perccode/analytic.hpp"
#include "perccode/cluster_io.hpp"
#include "perccode/codec.hpp"
#include "perccode/ensemble.hpp"
#include "perccode/errors.hpp"
#include "perccode/infomeasure.hpp"
#include "perccode/oracle.hpp"
#include "perccode/percolate.hpp"
#include "perccode/rng.hpp"

namespace perccode::cli {
namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flag storage shared by all subcommands; each subcommand binds the subset it accepts.
struct Flags {
  std::vector<double> ps;
  std::vector<int> depths;
  std::uint64_t samples = 10000;
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t index = 0;
  std::string format;
  std::string out;
  std::string book;
  std::string bits;
  std::string cluster;
  unsigned threads = 1;
};

double single_p(const Flags& f) {
  if (f.ps.size() != 1) throw UsageError("--p: exactly one value required, got " + std::to_string(f.ps.size()));
  return f.ps.front();
}

int single_depth(const Flags& f) {
  if (f.depths.size() != 1) {
    throw UsageError("--depth: exactly one value required, got " + std::to_string(f.depths.size()));
  }
  return f.depths.front();
}

// Writes to --out when given, else to `out`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw IOError("cannot open '" + path + "' for writing");
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

json moments_json(const analytic::MomentPair& m) { return {{"mean", m.mean}, {"variance", m.variance}}; }

json analytic_table(double p, const std::vector<int>& generations) {
  const ModelParams params(p);
  json doc = {
      {"p", params.p()},
      {"q", params.q()},
      {"mu", params.mu()},
      {"offspring", {{"p0", params.p0()}, {"p1", params.p1()}, {"p2", params.p2()}}},
      {"u0", params.u0()},
      {"u1", params.u1()},
      {"extinction_probability", analytic::extinction_probability(params)},
      {"lambda_mean", analytic::lambda_mean(params)},
      {"lambda_var", analytic::lambda_var(params)},
      {"expected_entropy_bits", analytic::expected_entropy(params)},
      {"expected_code_length", analytic::expected_code_length(params)},
  };
  if (!generations.empty()) {
    json rows = json::array();
    for (const int n : generations) {
      const auto nodes = analytic::node_moments(params, n);
      const auto leaves = analytic::leaf_moments(params, n);
      rows.push_back({{"n", n},
                      {"node_mean", nodes.mean},
                      {"node_var", nodes.variance},
                      {"leaf_mean", leaves.mean},
                      {"leaf_var_q2_form", leaves.var_q2_form},
                      {"leaf_var_q4_form", leaves.var_q4_form},
                      {"extinct_by_n", analytic::pgf_iterate(params, n, 0.0)}});
    }
    doc["generations"] = std::move(rows);
  }
  return doc;
}

json ensemble_json(const EnsembleStats& s, std::uint64_t seed) {
  auto stat = [](const RunningStat& r) { return json{{"mean", r.mean()}, {"se", r.std_error()}}; };
  auto optional = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json leaves = json::array();
  for (const auto& r : s.leaf_counts) leaves.push_back(stat(r));
  json nodes = json::array();
  for (const auto& r : s.node_counts) nodes.push_back(stat(r));
  return {{"rng", std::string(kRngVersion)},
          {"seed", seed},
          {"p", s.p},
          {"depth", s.depth},
          {"samples", s.samples},
          {"used", s.used},
          {"skipped_leafless", s.skipped_leafless},
          {"extinct_frac", s.extinct_frac()},
          {"extinct_se", s.extinct_std_error()},
          {"N_final", stat(s.final_nodes)},
          {"lambda", stat(s.lambda)},
          {"H_bits", stat(s.entropy_bits)},
          {"L", stat(s.avg_length)},
          {"node_counts", std::move(nodes)},
          {"leaf_counts", std::move(leaves)},
          {"analytic_H_bits", optional(s.analytic_entropy_bits)},
          {"analytic_L", optional(s.analytic_code_length)},
          {"analytic_lambda", optional(s.analytic_lambda)}};
}

json exact_json(const oracle::ExactStats& s) {
  json nodes = json::array();
  for (const auto& m : s.nodes) nodes.push_back(moments_json(m));
  json leaves = json::array();
  for (const auto& m : s.leaves) leaves.push_back(moments_json(m));
  json dists = json::array();
  for (const auto& d : s.node_distributions) dists.push_back(d.probabilities);
  return {{"depth", s.depth},
          {"configurations", s.configurations},
          {"nodes", std::move(nodes)},
          {"leaves", std::move(leaves)},
          {"node_distributions", std::move(dists)},
          {"expected_lambda", s.expected_lambda},
          {"leafless_probability", s.leafless_probability},
          {"expected_entropy_bits_given_leaves", s.expected_entropy_bits},
          {"expected_avg_length_given_leaves", s.expected_avg_length}};
}

Cluster load_cluster(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot open cluster file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("cluster file '" + path + "': " + e.what());
  }
  return cluster_from_json(doc);
}

std::string describe(const std::string& name, const Flags& f) {
  std::ostringstream s;
  s << "perccode " << name << ": rng=" << kRngVersion << " seed=" << f.seed;
  for (const double p : f.ps) s << " p=" << p;
  for (const int d : f.depths) s << " depth=" << d;
  s << " samples=" << f.samples << " index=" << f.index << " threads=" << f.threads;
  if (!f.format.empty()) s << " format=" << f.format;
  if (!f.out.empty()) s << " out=" << f.out;
  if (!f.cluster.empty()) s << " cluster=" << f.cluster;
  if (!f.book.empty()) s << " book=" << f.book;
  if (!f.bits.empty()) s << " bits=" << f.bits;
  return s.str();
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"perccode: root clusters of bond percolation on binary trees, read as prefix codes"};
  app.name("perccode");
  app.require_subcommand(1, 1);

  Flags f;
  auto add_p = [&](CLI::App* sub, const std::string& what) {
    return sub->add_option("--p", f.ps, what)->check(CLI::Range(0.0, 1.0))->type_name("P");
  };
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", f.seed, "master seed (default " + std::to_string(kDefaultSeed) + ")")->capture_default_str();
  };
  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", f.out, "write output to PATH instead of stdout")->type_name("PATH"); };

  auto* analytic_cmd = app.add_subcommand("analytic", "closed-form table as JSON");
  add_p(analytic_cmd, "percolation density (repeatable; several values give a JSON array)")
      ->required();
  analytic_cmd->add_option("--depth", f.depths, "add per-generation moments for these generations (repeatable)")
      ->check(CLI::NonNegativeNumber);
  add_out(analytic_cmd);

  auto* sample_cmd = app.add_subcommand("sample", "sample one root cluster and dump it");
  add_p(sample_cmd, "percolation density")->required();
  sample_cmd->add_option("--depth", f.depths, "depth bound")->required()->check(CLI::NonNegativeNumber);
  add_seed(sample_cmd);
  sample_cmd->add_option("--index", f.index, "sample index within the seed's stream family")->capture_default_str();
  sample_cmd->add_option("--format", f.format, "json (default) or dot")->check(CLI::IsMember({"json", "dot"}));
  add_out(sample_cmd);

  auto* codebook_cmd = app.add_subcommand("codebook", "list the prefix code of a sampled or loaded cluster");
  add_p(codebook_cmd, "percolation density (sampling, and the probability column)");
  codebook_cmd->add_option("--depth", f.depths, "depth bound for sampling")->check(CLI::NonNegativeNumber);
  add_seed(codebook_cmd);
  codebook_cmd->add_option("--index", f.index, "sample index")->capture_default_str();
  codebook_cmd->add_option("--cluster", f.cluster, "load the cluster from a JSON dump instead of sampling")
      ->type_name("PATH")
      ->check(CLI::ExistingFile);
  add_out(codebook_cmd);

  auto* ensemble_cmd = app.add_subcommand("ensemble", "Monte Carlo statistics for one (p, depth) cell");
  add_p(ensemble_cmd, "percolation density")->required();
  ensemble_cmd->add_option("--depth", f.depths, "depth bound")->required()->check(CLI::PositiveNumber);
  ensemble_cmd->add_option("--samples", f.samples, "number of clusters")->check(CLI::PositiveNumber)->capture_default_str();
  add_seed(ensemble_cmd);
  ensemble_cmd->add_option("--threads", f.threads, "worker threads (0 = all cores)")->capture_default_str();
  auto* ensemble_format = ensemble_cmd->add_option("--format", f.format, "csv (default, one row) or json (full detail)")
                              ->check(CLI::IsMember({"csv", "json"}));
  add_out(ensemble_cmd);

  auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo grid over p and depth, written as CSV");
  add_p(sweep_cmd, "percolation densities (repeatable)")->required();
  sweep_cmd->add_option("--depth", f.depths, "depth bounds (repeatable)")->required()->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--samples", f.samples, "clusters per cell")->check(CLI::PositiveNumber)->capture_default_str();
  add_seed(sweep_cmd);
  sweep_cmd->add_option("--threads", f.threads, "worker threads (0 = all cores)")->capture_default_str();
  auto* sweep_format = sweep_cmd->add_option("--format", f.format, "output format")->check(CLI::IsMember({"csv"}));
  add_out(sweep_cmd);

  auto* oracle_cmd = app.add_subcommand("oracle", "exact statistics by brute-force enumeration, as JSON");
  add_p(oracle_cmd, "percolation density")->required();
  oracle_cmd->add_option("--depth", f.depths, "depth bound (<= 3)")->required()->check(CLI::Range(0, oracle::kMaxEnumerationDepth));
  add_out(oracle_cmd);

  auto* decode_cmd = app.add_subcommand("decode", "parse a bitstring with a codebook file");
  decode_cmd->add_option("--book", f.book, "codebook text file")->required()->type_name("PATH")->check(CLI::ExistingFile);
  decode_cmd->add_option("--bits", f.bits, "bitstring of 0/1 characters")->required()->type_name("STRING");

  (void)ensemble_format;
  (void)sweep_format;

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    if (!app.get_subcommands().empty()) err << "run 'perccode " << app.get_subcommands().front()->get_name() << " --help'\n";
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  err << describe(name, f) << "\n";

  try {
    if (sub == analytic_cmd) {
      json doc;
      if (f.ps.size() == 1) {
        doc = analytic_table(f.ps.front(), f.depths);
      } else {
        doc = json::array();
        for (const double p : f.ps) doc.push_back(analytic_table(p, f.depths));
      }
      Sink sink(f.out, out);
      *sink << doc.dump(2) << "\n";
    } else if (sub == sample_cmd) {
      const ModelParams params(single_p(f));
      const Cluster cluster = sample_cluster(params, single_depth(f), f.seed, f.index);
      Sink sink(f.out, out);
      if (f.format == "dot") {
        *sink << cluster_to_dot(cluster);
      } else {
        json doc = cluster_to_json(cluster);
        doc["p"] = params.p();
        doc["seed"] = f.seed;
        doc["index"] = f.index;
        doc["rng"] = std::string(kRngVersion);
        *sink << doc.dump(2) << "\n";
      }
    } else if (sub == codebook_cmd) {
      std::optional<double> p;
      if (!f.ps.empty()) p = single_p(f);
      std::optional<Cluster> cluster;
      if (!f.cluster.empty()) {
        if (!f.depths.empty()) throw UsageError("--depth: not allowed together with --cluster");
        cluster = load_cluster(f.cluster);
      } else {
        if (!p) throw UsageError("--p: required unless --cluster is given");
        cluster = sample_cluster(ModelParams(*p), single_depth(f), f.seed, f.index);
      }
      const CodeBook book = extract_codebook(*cluster);
      const GenerationTally t = tally(*cluster);
      Sink sink(f.out, out);
      *sink << "# perccode codebook: " << book.size() << " symbols, depth_bound=" << cluster->depth_bound()
            << ", kraft_sum=" << kraft_sum(book) << ", prefix_free=" << (is_prefix_free(book) ? "true" : "false")
            << "\n";
      if (p) {
        const ConfigMeasures m = measure(t, *p);
        *sink << "# p=" << *p << " lambda=" << m.lambda;
        if (m.defined()) *sink << " entropy_bits=" << m.entropy_bits << " avg_length=" << m.avg_length;
        *sink << "\n";
      }
      write_codebook(*sink, book, book.empty() ? std::nullopt : p);
    } else if (sub == ensemble_cmd) {
      const ModelParams params(single_p(f));
      const EnsembleStats stats = run_ensemble(params, single_depth(f), f.samples, f.seed, f.threads);
      Sink sink(f.out, out);
      if (f.format == "json") {
        *sink << ensemble_json(stats, f.seed).dump(2) << "\n";
      } else {
        write_csv(*sink, std::span(&stats, 1), kRngVersion, f.seed);
      }
    } else if (sub == sweep_cmd) {
      EnsembleConfig config;
      config.ps = f.ps;
      config.depths = f.depths;
      config.samples = f.samples;
      config.seed = f.seed;
      config.threads = f.threads;
      if (f.out.empty()) {
        const auto rows = sweep(config);
        write_csv(out, rows, config.rng_version, config.seed);
      } else {
        config.out = f.out;
        sweep(config);
      }
    } else if (sub == oracle_cmd) {
      const ModelParams params(single_p(f));
      json doc = exact_json(oracle::exact_enumeration(params, single_depth(f)));
      doc["p"] = params.p();
      Sink sink(f.out, out);
      *sink << doc.dump(2) << "\n";
    } else if (sub == decode_cmd) {
      std::ifstream in(f.book);
      if (!in) throw IOError("cannot open codebook '" + f.book + "'");
      const CodeBook book = read_codebook(in);
      const auto indices = decode(book, f.bits);
      json symbols = json::array();
      for (const auto i : indices) symbols.push_back("s" + std::to_string(i + 1));
      out << json{{"indices", indices}, {"symbols", symbols}}.dump() << "\n";
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace perccode::cli
