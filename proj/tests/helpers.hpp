#pragma once

#include <string>
#include <vector>

#include "holab/forms.hpp"

namespace holab {
namespace testutil {

inline Polynomial mono(int nvars, const std::vector<int>& exponents, double c) {
  Polynomial p(nvars);
  p.add_term(exponents, c);
  return p;
}

inline Polynomial pconst(double c, int nvars) {
  return Polynomial::constant(nvars, c);
}

inline Polynomial pvar(int axis, int nvars, double coeff = 1.0) {
  Polynomial p(nvars);
  std::vector<int> m(nvars, 0);
  m[axis] = 1;
  p.add_term(m, coeff);
  return p;
}

// Scalar polynomial times a constant graded map, as a polynomial map.
inline GradedPolyMap scale_map(const Polynomial& s, const GradedLinearMap& M) {
  GradedPolyMap res(M.source(), M.target(), M.degree(), s.nvars());
  for (int deg : M.block_degrees()) {
    Matrix b = M.block(deg);
    if (b.size() == 0) continue;
    PolyMatrix pm(static_cast<int>(b.rows()), static_cast<int>(b.cols()),
                  s.nvars());
    for (int r = 0; r < b.rows(); ++r)
      for (int c = 0; c < b.cols(); ++c)
        if (b(r, c) != 0.0) pm(r, c) = s * b(r, c);
    res.set_block(deg, pm);
  }
  return res;
}

inline Polynomial rand_linear(Rng& rng, int nvars, double scale) {
  Polynomial p(nvars);
  p.add_term(std::vector<int>(nvars, 0), scale * rng.signed_unit());
  for (int a = 0; a < nvars; ++a) {
    std::vector<int> m(nvars, 0);
    m[a] = 1;
    p.add_term(m, scale * rng.signed_unit());
  }
  return p;
}

// Two-term complex: dims {-1:2, 0:2}, the differential sends the second
// degree -1 basis vector to the first degree 0 one.
inline CochainComplex two_term_complex() {
  GradedVectorSpace V(std::map<int, int>{{-1, 2}, {0, 2}});
  GradedLinearMap d = GradedLinearMap::zero(V, V, 1);
  Matrix D = Matrix::Zero(2, 2);
  D(0, 1) = 1.0;
  d.set_block(-1, D);
  return CochainComplex(V, d);
}

// Three-term complex: dims {-2:1, -1:2, 0:2} with the same nonzero block and
// a zero block out of degree -2, so degree -1 maps have a nontrivial exact
// subspace.
inline CochainComplex three_term_complex() {
  GradedVectorSpace V(std::map<int, int>{{-2, 1}, {-1, 2}, {0, 2}});
  GradedLinearMap d = GradedLinearMap::zero(V, V, 1);
  Matrix D = Matrix::Zero(2, 2);
  D(0, 1) = 1.0;
  d.set_block(-1, D);
  d.set_block(-2, Matrix::Zero(2, 1));
  return CochainComplex(V, d);
}

inline std::string scenario_file(const char* name) {
  return std::string(HOLAB_SCENARIO_DIR) + "/" + name;
}

}  // namespace testutil
}  // namespace holab
