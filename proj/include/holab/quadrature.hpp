#pragma once

#include <Eigen/Dense>

namespace holab {

/// Gauss-Legendre rule on the reference interval [-1, 1], nodes ascending.
struct QuadRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// Cached n-point Gauss-Legendre rule. Exact for polynomials of degree
/// <= 2n - 1. Thread safe.
const QuadRule& gauss_legendre(int n);

/// Cached prefix-integration matrix R for the n-point rule: given the node
/// values f_j of a polynomial f of degree < n, (R f)_i is the integral of f
/// from -1 to node i. Built from the discrete Legendre transform, so it is
/// exact on that degree range. Thread safe.
const Eigen::MatrixXd& gauss_legendre_prefix(int n);

}  // namespace holab
