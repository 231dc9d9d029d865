#include "holab/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include "holab/core.hpp"

namespace holab {

namespace {

// Value and derivative of the Legendre polynomial P_n at x in (-1, 1).
std::pair<double, double> legendre(int n, double x) {
  if (n == 0) return {1.0, 0.0};
  double prev = 1.0, cur = x;
  for (int k = 2; k <= n; ++k) {
    const double next = ((2 * k - 1) * x * cur - (k - 1) * prev) / k;
    prev = cur;
    cur = next;
  }
  const double deriv = n * (x * cur - prev) / (x * x - 1.0);
  return {cur, deriv};
}

QuadRule build_rule(int n) {
  if (n < 1) throw StructuralError("gauss_legendre: rule size must be positive");
  QuadRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Standard asymptotic guess for the (i+1)-th root, counted from +1 down,
    // then polished by Newton iteration.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 60; ++iter) {
      const auto [p, dp] = legendre(n, x);
      const double step = p / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const auto [p, dp] = legendre(n, x);
    (void)p;
    rule.nodes(n - 1 - i) = x;
    rule.weights(n - 1 - i) = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

// R = Q * P where P maps node values to Legendre coefficients (exact for
// degree < n because the quadrature handles degree <= 2n - 2) and Q holds the
// antiderivatives of P_m from -1 to each node.
Eigen::MatrixXd build_prefix(const QuadRule& rule) {
  const int n = static_cast<int>(rule.nodes.size());
  Eigen::MatrixXd values(n + 1, n);  // values(m, j) = P_m(x_j), m <= n
  for (int j = 0; j < n; ++j) {
    const double x = rule.nodes(j);
    values(0, j) = 1.0;
    if (n >= 1) values(1, j) = x;
    for (int m = 2; m <= n; ++m)
      values(m, j) = ((2 * m - 1) * x * values(m - 1, j) - (m - 1) * values(m - 2, j)) / m;
  }
  Eigen::MatrixXd coeff(n, n);
  for (int m = 0; m < n; ++m)
    for (int j = 0; j < n; ++j)
      coeff(m, j) = 0.5 * (2 * m + 1) * rule.weights(j) * values(m, j);
  Eigen::MatrixXd anti(n, n);  // anti(i, m) = integral of P_m over [-1, x_i]
  for (int i = 0; i < n; ++i) {
    anti(i, 0) = rule.nodes(i) + 1.0;
    for (int m = 1; m < n; ++m)
      anti(i, m) = (values(m + 1, i) - values(m - 1, i)) / (2 * m + 1);
  }
  return anti * coeff;
}

std::mutex cache_mutex;

}  // namespace

const QuadRule& gauss_legendre(int n) {
  static std::map<int, QuadRule> cache;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

const Eigen::MatrixXd& gauss_legendre_prefix(int n) {
  static std::map<int, Eigen::MatrixXd> cache;
  const QuadRule& rule = gauss_legendre(n);
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_prefix(rule)).first;
  return it->second;
}

}  // namespace holab
