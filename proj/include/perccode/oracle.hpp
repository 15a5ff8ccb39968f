#pragma once

// Exact reference distributions for desk-scale cross-checks.
//
// node_distribution expands f_n(x) = (p f_{n-1}(x) + q)^2 as a dense
// polynomial whose k-th coefficient is P(N_n = k). joint_leaf_distribution
// substitutes the bivariate f(x g(z)) = (p x g(z) + q)^2 into f_{n-1}, giving
// P(N_n = j, L_n = i). exact_enumeration walks every open/closed assignment
// of a small truncated tree and pushes each resulting cluster through the
// production tally/infomeasure code.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "perccode/analytic.hpp"
#include "perccode/params.hpp"

namespace perccode::oracle {

inline constexpr int kMaxNodeGeneration = 12;
inline constexpr int kMaxJointGeneration = 6;
inline constexpr int kMaxEnumerationDepth = 3;

/// probabilities[k] = P(N_n = k), k = 0..2^n.
struct DistVector {
  std::vector<double> probabilities;

  double total() const noexcept;
  analytic::MomentPair moments() const noexcept;
};

/// P(N_n = j, L_n = i) for 0 <= i <= j <= 2^n.
class JointDist {
 public:
  explicit JointDist(std::size_t max_nodes);

  std::size_t max_nodes() const noexcept { return max_nodes_; }
  double at(std::size_t nodes, std::size_t leaves) const;
  double& at(std::size_t nodes, std::size_t leaves);

  double total() const noexcept;
  DistVector node_marginal() const;
  DistVector leaf_marginal() const;

 private:
  std::size_t max_nodes_;
  std::vector<double> cells_;  // (max_nodes + 1)^2, row = nodes
};

struct ExactStats {
  int depth = 0;
  std::uint64_t configurations = 0;
  std::vector<analytic::MomentPair> nodes;   // n = 0..depth
  std::vector<analytic::MomentPair> leaves;  // n = 0..depth-1
  std::vector<DistVector> node_distributions;  // n = 0..depth
  double expected_lambda = 0.0;
  double leafless_probability = 0.0;
  // Conditioned on Lambda > 0; zero when every configuration is leafless.
  double expected_entropy_bits = 0.0;
  double expected_avg_length = 0.0;
};

/// Throws SizeError for n > kMaxNodeGeneration, DomainError for n < 0.
DistVector node_distribution(const ModelParams& params, int n);

/// Throws SizeError for n > kMaxJointGeneration, DomainError for n < 1.
JointDist joint_leaf_distribution(const ModelParams& params, int n);

/// Brute force over all 2^(2^(depth+1) - 2) edge states.
/// Throws SizeError for depth > kMaxEnumerationDepth, DomainError for depth < 0.
ExactStats exact_enumeration(const ModelParams& params, int depth);

}  // namespace perccode::oracle
