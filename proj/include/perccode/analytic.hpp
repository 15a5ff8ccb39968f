#pragma once

// Closed forms for the binary branching process and the code it induces.
//
// Generation counts N_n and leaf counts L_n of the root cluster follow from
// iterating f(x) = (p x + q)^2 and from the leaf generating function
// g(z) = q^2 z + 2pq + p^2. The series quantities (lambda, its variance,
// expected entropy and codeword length) converge only on part of [0, 1];
// outside that region the functions throw DomainError rather than return
// non-finite values.

#include "perccode/params.hpp"

namespace perccode::analytic {

struct MomentPair {
  double mean = 0.0;
  double variance = 0.0;
};

/// Leaf-count moments. Two variance forms are carried because the source
/// derivation states Var[L_n] = u1^2 Var[N_n] in general but applies
/// q^2 Var[N_n] in the binary case; neither matches exact enumeration.
struct LeafMoments {
  double mean = 0.0;
  double var_q2_form = 0.0;  // q^2 * Var[N_n]
  double var_q4_form = 0.0;  // u1^2 * Var[N_n] = q^4 * Var[N_n]
};

/// Offspring PGF f(xi) = (p xi + q)^2, xi in [0, 1].
double pgf_eval(const ModelParams& params, double xi);

/// Leaf PGF g(zeta) = u1 zeta + u0, zeta in [0, 1].
double leaf_pgf_eval(const ModelParams& params, double zeta);

/// n-fold composition f_n(xi0); f_n(0) is P(extinct by generation n).
double pgf_iterate(const ModelParams& params, int n, double xi0);

/// Smallest fixed point of f: 1 for p <= 1/2, (q/p)^2 otherwise.
double extinction_probability(const ModelParams& params);

MomentPair node_moments(const ModelParams& params, int n);

LeafMoments leaf_moments(const ModelParams& params, int n);

/// E[Lambda] = q^2 / (1 - 2p^2); requires 2p^2 < 1.
double lambda_mean(const ModelParams& params);

/// Var[Lambda] = 2p^2 q^3 / ((1 - 4p^3)(1 - 2p^2)); 1/4 at p = 1/2.
/// Requires 4p^3 < 1.
double lambda_var(const ModelParams& params);

/// Expected entropy in bits with Lambda replaced by its mean.
double expected_entropy(const ModelParams& params);

/// 2p^2 / (1 - 2p^2).
double expected_code_length(const ModelParams& params);

/// Predicates matching the domain checks above.
bool lambda_converges(const ModelParams& params) noexcept;
bool lambda_var_converges(const ModelParams& params) noexcept;

}  // namespace perccode::analytic
