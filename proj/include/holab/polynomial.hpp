#pragma once

#include <map>
#include <span>
#include <vector>

#include "holab/core.hpp"

namespace holab {

// Exponent vector; size equals the variable count of the owning polynomial.
using MultiIndex = std::vector<int>;

// Sparse multivariate polynomial with real coefficients. Terms with
// |coefficient| == 0 are never stored, so comparing term tables is exact.
class Polynomial {
public:
  Polynomial() : nvars_(0) {}
  explicit Polynomial(int nvars);
  static Polynomial constant(int nvars, double c);
  static Polynomial variable(int nvars, int axis);

  int nvars() const { return nvars_; }
  const std::map<MultiIndex, double>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int total_degree() const;
  double max_abs_coeff() const;

  void add_term(const MultiIndex& exponents, double coeff);
  double coeff(const MultiIndex& exponents) const;

  double operator()(std::span<const double> x) const;
  Polynomial derivative(int axis) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(double s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  // Substitutes images[i] for variable i. All images must share a variable
  // count, which becomes the variable count of the result.
  Polynomial compose(std::span<const Polynomial> images) const;

private:
  int nvars_;
  std::map<MultiIndex, double> terms_;
};

// Convenience for polynomial curves/surfaces stored coordinatewise.
std::vector<double> eval_tuple(std::span<const Polynomial> polys,
                               std::span<const double> x);

}  // namespace holab
