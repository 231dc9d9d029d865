#pragma once

#include "holab/graded.hpp"

namespace holab {

// Crossed module attached to a cochain complex (V, d).
//
// G is the group of invertible degree-0 chain maps of V. H carries the group
// of degree -1 maps h under the product
//   h1 * h2 = h1 + h2 + h1 (d h2 + h2 d),
// for which tau(h) = id + dh + hd is a homomorphism into G. alpha is
// conjugation. Elements of H are considered modulo maps of the form
// dk - kd with k of degree -2; solve_exactness on the underlying complex
// decides that equivalence.
class CrossedModule {
public:
  explicit CrossedModule(CochainComplex complex);

  const CochainComplex& complex() const { return complex_; }
  const GradedVectorSpace& space() const { return complex_.space(); }
  const GradedLinearMap& d() const { return complex_.differential(); }

  // Validation. g must be a degree-0 chain map with invertible blocks; h must
  // be degree -1 with tau(h) invertible. Each throws DomainError otherwise.
  void check_g(const GradedLinearMap& g, double tol = 1e-9) const;
  void check_h(const GradedLinearMap& h) const;

  // tau(h) = id + dh + hd.
  GradedLinearMap tau(const GradedLinearMap& h) const;

  // Group law on H and its inverse: h_inv(h) = -h tau(h)^{-1}.
  GradedLinearMap h_mul(const GradedLinearMap& h1, const GradedLinearMap& h2) const;
  GradedLinearMap h_inv(const GradedLinearMap& h) const;
  GradedLinearMap h_identity() const;

  // alpha(g, h) = g h g^{-1}.
  GradedLinearMap alpha(const GradedLinearMap& g, const GradedLinearMap& h) const;

  // Infinitesimal versions. tau_star(S) = dS + Sd for S of degree -1;
  // alpha_star(R, S) = RS - SR for R of degree 0.
  GradedLinearMap tau_star(const GradedLinearMap& S) const;
  GradedLinearMap alpha_star(const GradedLinearMap& R, const GradedLinearMap& S) const;

  // Bracket on the degree -1 piece: [T, S] = S dT - T dS + S T d - T S d.
  // Closes the Lie algebra up to exact terms.
  GradedLinearMap bracket_h(const GradedLinearMap& T, const GradedLinearMap& S) const;

  // Left Maurer-Cartan translation at h: the tangent vector hdot pulled back
  // to the Lie algebra of H, hdot - h tau(h)^{-1} tau_star(hdot).
  GradedLinearMap mc_translate(const GradedLinearMap& h,
                               const GradedLinearMap& hdot) const;

  // Adjoint action of h on the Lie algebra of H: (Y + h tau_star(Y)) tau(h)^{-1}.
  GradedLinearMap ad_h(const GradedLinearMap& h, const GradedLinearMap& Y) const;

  // Derivative of g -> alpha(g, h) at the identity in direction X (degree 0),
  // translated back to the Lie algebra of H.
  GradedLinearMap alpha_tilde_star(const GradedLinearMap& h,
                                   const GradedLinearMap& X) const;

  // Derivative of left translation by h applied to Lie algebra element K.
  GradedLinearMap left_translate_star(const GradedLinearMap& h,
                                      const GradedLinearMap& K) const;

  // Whether two degree -1 maps agree modulo exact terms; returns the residual
  // of the best witness.
  double distance_mod_exact(const GradedLinearMap& a, const GradedLinearMap& b) const;

private:
  CochainComplex complex_;
  GradedLinearMap identity_;
};

}  // namespace holab
