#include "holab/crossed.hpp"

namespace holab {

CrossedModule::CrossedModule(CochainComplex complex)
    : complex_(std::move(complex)),
      identity_(GradedLinearMap::identity(complex_.space())) {}

void CrossedModule::check_g(const GradedLinearMap& g, double tol) const {
  if (g.degree() != 0 || !(g.source() == space()) || !(g.target() == space()))
    throw DomainError("G element must be a degree-0 endomorphism of the complex");
  const GradedLinearMap defect = compose(d(), g) - compose(g, d());
  if (norm(defect) > tol * (1.0 + norm(g) * norm(d())))
    throw DomainError("G element does not commute with the differential");
  inverse(g);  // throws if any block is singular
}

void CrossedModule::check_h(const GradedLinearMap& h) const {
  if (h.degree() != -1 || !(h.source() == space()) || !(h.target() == space()))
    throw DomainError("H element must be a degree -1 endomorphism of the complex");
  inverse(tau(h));
}

GradedLinearMap CrossedModule::tau(const GradedLinearMap& h) const {
  return identity_ + compose(d(), h) + compose(h, d());
}

GradedLinearMap CrossedModule::h_mul(const GradedLinearMap& h1,
                                     const GradedLinearMap& h2) const {
  return h1 + h2 + compose(h1, compose(d(), h2) + compose(h2, d()));
}

GradedLinearMap CrossedModule::h_inv(const GradedLinearMap& h) const {
  return -1.0 * compose(h, inverse(tau(h)));
}

GradedLinearMap CrossedModule::h_identity() const {
  return GradedLinearMap::zero(space(), space(), -1);
}

GradedLinearMap CrossedModule::alpha(const GradedLinearMap& g,
                                     const GradedLinearMap& h) const {
  return compose(g, compose(h, inverse(g)));
}

GradedLinearMap CrossedModule::tau_star(const GradedLinearMap& S) const {
  return compose(d(), S) + compose(S, d());
}

GradedLinearMap CrossedModule::alpha_star(const GradedLinearMap& R,
                                          const GradedLinearMap& S) const {
  return compose(R, S) - compose(S, R);
}

GradedLinearMap CrossedModule::bracket_h(const GradedLinearMap& T,
                                         const GradedLinearMap& S) const {
  return compose(S, compose(d(), T)) - compose(T, compose(d(), S)) +
         compose(compose(S, T), d()) - compose(compose(T, S), d());
}

GradedLinearMap CrossedModule::mc_translate(const GradedLinearMap& h,
                                            const GradedLinearMap& hdot) const {
  return hdot - compose(h, compose(inverse(tau(h)), tau_star(hdot)));
}

GradedLinearMap CrossedModule::ad_h(const GradedLinearMap& h,
                                    const GradedLinearMap& Y) const {
  return compose(Y + compose(h, tau_star(Y)), inverse(tau(h)));
}

GradedLinearMap CrossedModule::alpha_tilde_star(const GradedLinearMap& h,
                                                const GradedLinearMap& X) const {
  return mc_translate(h, compose(X, h) - compose(h, X));
}

GradedLinearMap CrossedModule::left_translate_star(const GradedLinearMap& h,
                                                   const GradedLinearMap& K) const {
  return K + compose(h, tau_star(K));
}

double CrossedModule::distance_mod_exact(const GradedLinearMap& a,
                                         const GradedLinearMap& b) const {
  return complex_.solve_exactness(a - b).residual;
}

}  // namespace holab
