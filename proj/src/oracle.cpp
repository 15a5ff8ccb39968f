#include "perccode/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "perccode/errors.hpp"
#include "perccode/infomeasure.hpp"
#include "perccode/percolate.hpp"

namespace perccode::oracle {
namespace {

using Poly = std::vector<double>;

Poly multiply(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

// Dense bivariate polynomial, coefficient of x^j z^i at j * stride + i.
struct Poly2 {
  std::size_t deg = 0;  // same bound in both variables
  std::vector<double> c;

  explicit Poly2(std::size_t d) : deg(d), c((d + 1) * (d + 1), 0.0) {}
  double& at(std::size_t j, std::size_t i) { return c[j * (deg + 1) + i]; }
  double at(std::size_t j, std::size_t i) const { return c[j * (deg + 1) + i]; }
};

Poly2 multiply(const Poly2& a, const Poly2& b) {
  Poly2 out(a.deg + b.deg);
  for (std::size_t j1 = 0; j1 <= a.deg; ++j1) {
    for (std::size_t i1 = 0; i1 <= a.deg; ++i1) {
      const double av = a.at(j1, i1);
      if (av == 0.0) continue;
      for (std::size_t j2 = 0; j2 <= b.deg; ++j2) {
        for (std::size_t i2 = 0; i2 <= b.deg; ++i2) out.at(j1 + j2, i1 + i2) += av * b.at(j2, i2);
      }
    }
  }
  return out;
}

analytic::MomentPair moments_of(const std::vector<double>& probs) {
  double mean = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) mean += static_cast<double>(k) * probs[k];
  double var = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const double d = static_cast<double>(k) - mean;
    var += d * d * probs[k];
  }
  return {mean, var};
}

// Running first/second moments weighted by configuration probability.
struct WeightedMoments {
  double sum = 0.0;
  double sum_sq = 0.0;
  void add(double w, double x) {
    sum += w * x;
    sum_sq += w * x * x;
  }
  analytic::MomentPair get() const { return {sum, sum_sq - sum * sum}; }
};

}  // namespace

double DistVector::total() const noexcept {
  double s = 0.0;
  for (const double v : probabilities) s += v;
  return s;
}

analytic::MomentPair DistVector::moments() const noexcept { return moments_of(probabilities); }

JointDist::JointDist(std::size_t max_nodes)
    : max_nodes_(max_nodes), cells_((max_nodes + 1) * (max_nodes + 1), 0.0) {}

double JointDist::at(std::size_t nodes, std::size_t leaves) const {
  if (nodes > max_nodes_ || leaves > max_nodes_) throw IndexError("joint distribution index out of range");
  return cells_[nodes * (max_nodes_ + 1) + leaves];
}

double& JointDist::at(std::size_t nodes, std::size_t leaves) {
  if (nodes > max_nodes_ || leaves > max_nodes_) throw IndexError("joint distribution index out of range");
  return cells_[nodes * (max_nodes_ + 1) + leaves];
}

double JointDist::total() const noexcept {
  double s = 0.0;
  for (const double v : cells_) s += v;
  return s;
}

DistVector JointDist::node_marginal() const {
  DistVector d{std::vector<double>(max_nodes_ + 1, 0.0)};
  for (std::size_t j = 0; j <= max_nodes_; ++j) {
    for (std::size_t i = 0; i <= j; ++i) d.probabilities[j] += at(j, i);
  }
  return d;
}

DistVector JointDist::leaf_marginal() const {
  DistVector d{std::vector<double>(max_nodes_ + 1, 0.0)};
  for (std::size_t j = 0; j <= max_nodes_; ++j) {
    for (std::size_t i = 0; i <= j; ++i) d.probabilities[i] += at(j, i);
  }
  return d;
}

DistVector node_distribution(const ModelParams& params, int n) {
  if (n < 0) throw DomainError("generation must be >= 0");
  if (n > kMaxNodeGeneration) {
    throw SizeError("node_distribution supports n <= " + std::to_string(kMaxNodeGeneration) + ", got " +
                    std::to_string(n));
  }
  Poly f{0.0, 1.0};  // f_0(x) = x
  for (int i = 0; i < n; ++i) {
    Poly inner = f;  // p f + q
    for (double& c : inner) c *= params.p();
    inner[0] += params.q();
    f = multiply(inner, inner);
  }
  return {std::move(f)};
}

JointDist joint_leaf_distribution(const ModelParams& params, int n) {
  if (n < 1) throw DomainError("joint_leaf_distribution needs n >= 1");
  if (n > kMaxJointGeneration) {
    throw SizeError("joint_leaf_distribution supports n <= " + std::to_string(kMaxJointGeneration) +
                    ", got " + std::to_string(n));
  }
  // Inner polynomial p x g(z) + q with g(z) = u1 z + u0.
  Poly2 linear(1);
  linear.at(0, 0) = params.q();
  linear.at(1, 0) = params.p() * params.u0();
  linear.at(1, 1) = params.p() * params.u1();
  const Poly2 inner = multiply(linear, linear);  // f(x g(z)), degree 2

  const DistVector outer = node_distribution(params, n - 1);  // f_{n-1}
  const std::size_t top = 1u << n;

  // Horner: sum_k a_k F^k.
  Poly2 acc(0);
  for (std::size_t k = outer.probabilities.size(); k-- > 0;) {
    acc = acc.deg == 0 && acc.at(0, 0) == 0.0 ? Poly2(0) : multiply(acc, inner);
    acc.at(0, 0) += outer.probabilities[k];
  }

  JointDist joint(top);
  for (std::size_t j = 0; j <= std::min(top, acc.deg); ++j) {
    for (std::size_t i = 0; i <= j; ++i) joint.at(j, i) = acc.at(j, i);
  }
  return joint;
}

ExactStats exact_enumeration(const ModelParams& params, int depth) {
  if (depth < 0) throw DomainError("depth must be >= 0");
  if (depth > kMaxEnumerationDepth) {
    throw SizeError("exact_enumeration supports depth <= " + std::to_string(kMaxEnumerationDepth) +
                    ", got " + std::to_string(depth));
  }
  const unsigned edges = (2u << depth) - 2u;
  const std::uint64_t configs = std::uint64_t{1} << edges;
  const double p = params.p();
  const double q = params.q();

  ExactStats stats;
  stats.depth = depth;
  stats.configurations = configs;
  const auto gens = static_cast<std::size_t>(depth) + 1;
  std::vector<WeightedMoments> node_acc(gens);
  std::vector<WeightedMoments> leaf_acc(static_cast<std::size_t>(depth));
  stats.node_distributions.assign(gens, DistVector{});
  for (std::size_t n = 0; n < gens; ++n) {
    stats.node_distributions[n].probabilities.assign((std::size_t{1} << n) + 1, 0.0);
  }
  double lambda_sum = 0.0;
  double defined_weight = 0.0;
  double leafless_weight = 0.0;
  double entropy_sum = 0.0;
  double length_sum = 0.0;

  for (std::uint64_t mask = 0; mask < configs; ++mask) {
    const int open = __builtin_popcountll(mask);
    const double weight = std::pow(p, open) * std::pow(q, static_cast<int>(edges) - open);
    if (weight == 0.0) continue;
    // Edge into heap node h has bit h - 1.
    const Cluster cluster = grow_cluster(depth, [mask](std::uint64_t h) { return ((mask >> (h - 1)) & 1u) != 0; });
    const GenerationTally t = tally(cluster);
    for (std::size_t n = 0; n < gens; ++n) {
      node_acc[n].add(weight, static_cast<double>(t.node_counts[n]));
      stats.node_distributions[n].probabilities[t.node_counts[n]] += weight;
    }
    for (std::size_t n = 0; n < leaf_acc.size(); ++n) leaf_acc[n].add(weight, static_cast<double>(t.leaf_counts[n]));
    const ConfigMeasures m = measure(t, p);
    lambda_sum += weight * m.lambda;
    if (m.defined()) {
      defined_weight += weight;
      entropy_sum += weight * m.entropy_bits;
      length_sum += weight * m.avg_length;
    } else {
      leafless_weight += weight;
    }
  }

  for (const auto& acc : node_acc) stats.nodes.push_back(acc.get());
  for (const auto& acc : leaf_acc) stats.leaves.push_back(acc.get());
  stats.expected_lambda = lambda_sum;
  stats.leafless_probability = leafless_weight;
  if (defined_weight > 0.0) {
    stats.expected_entropy_bits = entropy_sum / defined_weight;
    stats.expected_avg_length = length_sum / defined_weight;
  }
  return stats;
}

}  // namespace perccode::oracle
