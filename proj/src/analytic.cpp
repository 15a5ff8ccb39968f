#include "perccode/analytic.hpp"

#include <cmath>
#include <string>

#include "perccode/errors.hpp"

namespace perccode::analytic {
namespace {

void require_unit(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError(std::string(name) + " must lie in [0, 1], got " + format_real(x));
  }
}

void require_generation(int n) {
  if (n < 0) throw DomainError("generation must be >= 0, got " + std::to_string(n));
}

void require_lambda_window(const ModelParams& params) {
  if (!lambda_converges(params)) {
    throw DomainError("series diverges at p = " + format_real(params.p()) +
                      ": requires 2p^2 < 1 (p < sqrt(1/2) ~ 0.707107)");
  }
}

}  // namespace

bool lambda_converges(const ModelParams& params) noexcept {
  return 2.0 * params.p() * params.p() < 1.0;
}

bool lambda_var_converges(const ModelParams& params) noexcept {
  const double p = params.p();
  return p == 0.5 || 4.0 * p * p * p < 1.0;
}

double pgf_eval(const ModelParams& params, double xi) {
  require_unit(xi, "xi");
  const double t = params.p() * xi + params.q();
  return t * t;
}

double leaf_pgf_eval(const ModelParams& params, double zeta) {
  require_unit(zeta, "zeta");
  return params.u1() * zeta + params.u0();
}

double pgf_iterate(const ModelParams& params, int n, double xi0) {
  require_generation(n);
  require_unit(xi0, "xi0");
  double xi = xi0;
  for (int i = 0; i < n; ++i) {
    const double t = params.p() * xi + params.q();
    xi = t * t;
  }
  return xi;
}

double extinction_probability(const ModelParams& params) {
  if (params.p() <= 0.5) return 1.0;
  const double r = params.q() / params.p();
  return r * r;
}

MomentPair node_moments(const ModelParams& params, int n) {
  require_generation(n);
  const double mu = params.mu();
  const double mean = std::pow(mu, n);
  // q mu^n (mu^n - 1)/(mu - 1), written as a geometric sum so that mu = 1
  // reduces to n q = n/2 without a special case.
  double geometric = 0.0;
  double term = 1.0;
  for (int i = 0; i < n; ++i) {
    geometric += term;
    term *= mu;
  }
  return {mean, params.q() * mean * geometric};
}

LeafMoments leaf_moments(const ModelParams& params, int n) {
  const MomentPair nodes = node_moments(params, n);
  const double u1 = params.u1();
  return {u1 * nodes.mean, u1 * nodes.variance, u1 * u1 * nodes.variance};
}

double lambda_mean(const ModelParams& params) {
  require_lambda_window(params);
  const double p = params.p();
  return params.q() * params.q() / (1.0 - 2.0 * p * p);
}

double lambda_var(const ModelParams& params) {
  const double p = params.p();
  if (p == 0.5) return 0.25;
  if (!lambda_var_converges(params)) {
    throw DomainError("Var[Lambda] diverges at p = " + format_real(p) +
                      ": requires 4p^3 < 1 (p < cbrt(1/4) ~ 0.629961)");
  }
  const double q = params.q();
  return 2.0 * p * p * q * q * q / ((1.0 - 4.0 * p * p * p) * (1.0 - 2.0 * p * p));
}

double expected_entropy(const ModelParams& params) {
  const double lambda = lambda_mean(params);
  const double p = params.p();
  const double two_p2 = 2.0 * p * p;
  // p log(1/p) -> 0 as p -> 0.
  const double first = p == 0.0 ? 0.0 : two_p2 * -std::log2(p) / (1.0 - two_p2);
  return first + std::log2(lambda);
}

double expected_code_length(const ModelParams& params) {
  require_lambda_window(params);
  const double two_p2 = 2.0 * params.p() * params.p();
  return two_p2 / (1.0 - two_p2);
}

}  // namespace perccode::analytic
