#pragma once

namespace perccode {

/// Bond-percolation density on the binary tree and the offspring law it induces.
///
/// Each edge is open with probability p, so a node has 0, 1 or 2 children with
/// probabilities q^2, 2pq, p^2, and is a leaf with probability q^2.
class ModelParams {
 public:
  /// Throws DomainError unless 0 <= p <= 1.
  explicit ModelParams(double p);

  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }
  double mu() const noexcept { return 2.0 * p_; }

  double p0() const noexcept { return q_ * q_; }
  double p1() const noexcept { return 2.0 * p_ * q_; }
  double p2() const noexcept { return p_ * p_; }

  double u1() const noexcept { return q_ * q_; }
  double u0() const noexcept { return 2.0 * p_ * q_ + p_ * p_; }

 private:
  double p_;
  double q_;
};

}  // namespace perccode
