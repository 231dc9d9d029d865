#include "holab/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace holab {

Polynomial::Polynomial(int nvars) : nvars_(nvars) {
  if (nvars < 0) throw StructuralError("polynomial: negative variable count");
}

Polynomial Polynomial::constant(int nvars, double c) {
  Polynomial p(nvars);
  p.add_term(MultiIndex(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(int nvars, int axis) {
  if (axis < 0 || axis >= nvars)
    throw StructuralError("polynomial: variable axis out of range");
  Polynomial p(nvars);
  MultiIndex mi(nvars, 0);
  mi[axis] = 1;
  p.add_term(mi, 1.0);
  return p;
}

int Polynomial::total_degree() const {
  int deg = 0;
  for (const auto& [mi, c] : terms_)
    deg = std::max(deg, std::accumulate(mi.begin(), mi.end(), 0));
  return deg;
}

double Polynomial::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [mi, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

void Polynomial::add_term(const MultiIndex& exponents, double coeff) {
  if (static_cast<int>(exponents.size()) != nvars_)
    throw StructuralError("polynomial: exponent arity mismatch");
  for (int e : exponents)
    if (e < 0) throw StructuralError("polynomial: negative exponent");
  auto it = terms_.find(exponents);
  if (it == terms_.end()) {
    if (coeff != 0.0) terms_.emplace(exponents, coeff);
    return;
  }
  it->second += coeff;
  if (it->second == 0.0) terms_.erase(it);
}

double Polynomial::coeff(const MultiIndex& exponents) const {
  auto it = terms_.find(exponents);
  return it == terms_.end() ? 0.0 : it->second;
}

double Polynomial::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != nvars_)
    throw StructuralError("polynomial: evaluation arity mismatch");
  double acc = 0.0;
  for (const auto& [mi, c] : terms_) {
    double term = c;
    for (int v = 0; v < nvars_; ++v)
      for (int e = 0; e < mi[v]; ++e) term *= x[v];
    acc += term;
  }
  return acc;
}

Polynomial Polynomial::derivative(int axis) const {
  if (axis < 0 || axis >= nvars_)
    throw StructuralError("polynomial: derivative axis out of range");
  Polynomial out(nvars_);
  for (const auto& [mi, c] : terms_) {
    if (mi[axis] == 0) continue;
    MultiIndex d = mi;
    d[axis] -= 1;
    out.add_term(d, c * mi[axis]);
  }
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (nvars_ != other.nvars_)
    throw StructuralError("polynomial: variable count mismatch in +");
  for (const auto& [mi, c] : other.terms_) add_term(mi, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  if (nvars_ != other.nvars_)
    throw StructuralError("polynomial: variable count mismatch in -");
  for (const auto& [mi, c] : other.terms_) add_term(mi, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [mi, c] : terms_) c *= s;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.nvars_ != b.nvars_)
    throw StructuralError("polynomial: variable count mismatch in *");
  Polynomial out(a.nvars_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      MultiIndex m = ma;
      for (int v = 0; v < a.nvars_; ++v) m[v] += mb[v];
      out.add_term(m, ca * cb);
    }
  }
  return out;
}

Polynomial Polynomial::compose(std::span<const Polynomial> images) const {
  if (static_cast<int>(images.size()) != nvars_)
    throw StructuralError("polynomial: compose arity mismatch");
  const int out_vars = images.empty() ? 0 : images[0].nvars();
  for (const auto& im : images)
    if (im.nvars() != out_vars)
      throw StructuralError("polynomial: compose images disagree on arity");

  Polynomial acc(out_vars);
  for (const auto& [mi, c] : terms_) {
    Polynomial term = Polynomial::constant(out_vars, c);
    for (int v = 0; v < nvars_; ++v)
      for (int e = 0; e < mi[v]; ++e) term = term * images[v];
    acc += term;
  }
  return acc;
}

std::vector<double> eval_tuple(std::span<const Polynomial> polys,
                               std::span<const double> x) {
  std::vector<double> out(polys.size());
  for (std::size_t i = 0; i < polys.size(); ++i) out[i] = polys[i](x);
  return out;
}

}  // namespace holab
