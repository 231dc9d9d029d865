#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "holab/crossed.hpp"
#include "holab/forms.hpp"
#include "holab/holonomy.hpp"
#include "holab/simplex.hpp"

namespace holab {

// Nonempty box intersection of the charts named by indices.
struct Overlap {
  std::vector<int> indices;
  std::vector<double> lo, hi;
};

// Finite cover of a box region by axis-aligned charts in shared global
// coordinates. Pairwise, triple and quadruple intersections with positive
// volume are enumerated at construction; validators iterate over them.
class Cover {
public:
  Cover() = default;
  explicit Cover(std::vector<Chart> charts);

  int size() const { return static_cast<int>(charts_.size()); }
  int dim() const;
  const Chart& chart(int i) const;
  const std::vector<Chart>& charts() const { return charts_; }

  const std::vector<Overlap>& pairs() const { return pairs_; }
  const std::vector<Overlap>& triples() const { return triples_; }
  const std::vector<Overlap>& quadruples() const { return quadruples_; }

  // Intersection box of an arbitrary index set, empty if the volume vanishes.
  std::optional<Overlap> intersection(const std::vector<int>& indices) const;

private:
  std::vector<Chart> charts_;
  std::vector<Overlap> pairs_, triples_, quadruples_;
};

// Deterministic low-discrepancy points inside an overlap box.
std::vector<Vector> overlap_samples(const Overlap& o, int count);

// Transition data on a cover: invertible chain-map valued polynomials g_ij on
// pair overlaps and degree -1 valued polynomials a_ijk on triple overlaps.
// Pointwise accessors fall back to the inverse of the reverse orientation
// when only that one is stored, and to the identity (resp. zero) when the
// indices coincide (resp. no a is stored).
class GammaCocycle {
public:
  GammaCocycle() : nvars_(0) {}
  GammaCocycle(GradedVectorSpace space, int nvars);

  const GradedVectorSpace& space() const { return space_; }
  int nvars() const { return nvars_; }

  void set_transition(int i, int j, GradedPolyMap g);
  void set_a(int i, int j, int k, GradedPolyMap a);

  bool has_transition(int i, int j) const;
  bool has_a(int i, int j, int k) const;

  GradedLinearMap transition_at(int i, int j, const Vector& x) const;
  // Directional derivative of g_ij along coordinate axis at x; differentiates
  // through the pointwise inverse when the reverse orientation is stored.
  GradedLinearMap transition_derivative_at(int i, int j, int axis,
                                           const Vector& x) const;
  GradedLinearMap a_at(int i, int j, int k, const Vector& x) const;
  GradedLinearMap a_derivative_at(int i, int j, int k, int axis,
                                  const Vector& x) const;

private:
  GradedVectorSpace space_;
  int nvars_;
  std::map<std::pair<int, int>, GradedPolyMap> g_;
  std::map<std::array<int, 3>, GradedPolyMap> a_;
};

struct CocycleReport {
  double g_residual = 0.0;  // g_ik = tau(a_ijk) g_ij g_jk over triples
  double a_residual = 0.0;  // a_ijl * a_jkl = a_ikl * alpha(g_kl, a_ijk)
  double max() const { return std::max(g_residual, a_residual); }
};

// Max-sample residuals of the two cocycle identities. The group identity is
// measured in operator norm; the degree -1 identity modulo exact terms.
CocycleReport validate_cocycle(const Cover& cover, const GammaCocycle& cocycle,
                               const CochainComplex& complex,
                               int samples_per_overlap = 8);

// Cocycle decorated with connection data: a chain-map valued 1-form A_i and a
// degree -1 valued 2-form B_i per chart, and a degree -1 valued 1-form phi_ij
// per pair overlap. Missing phi entries mean zero.
struct DifferentialCocycle {
  Cover cover;
  GammaCocycle cocycle;
  CochainComplex complex;
  std::map<int, EndValuedForm> A;
  std::map<int, EndValuedForm> B;
  std::map<std::pair<int, int>, EndValuedForm> phi;

  const EndValuedForm& A_at(int i) const;
  const EndValuedForm& B_at(int i) const;
  // Stored form for the ordered pair, or a zero 1-form of inner degree -1.
  EndValuedForm phi_or_zero(int i, int j) const;
};

struct DifferentialReport {
  double dc1 = 0.0;  // A_j + tau_*(phi_ij) = g^{-1} A_i g + g^{-1} dg
  double dc2 = 0.0;  // g^{-1} B_i g = B_j + d phi + quadratic terms
  double dc3 = 0.0;  // phi_ik vs phi_jk + conjugated phi_ij + a-terms
  double max() const { return std::max(dc1, std::max(dc2, dc3)); }
};

// Max-sample residuals of the three compatibility conditions between the
// per-chart connection data across overlaps. The chain-map valued condition
// is measured raw; the degree -1 valued ones modulo exact terms. The third
// condition is evaluated in the arrangement whose tau_* image telescopes to
// the first condition composed along i -> j -> k, so it holds on any data
// built from consistent local gauges regardless of commutativity.
DifferentialReport validate_differential(const DifferentialCocycle& D,
                                         int samples_per_overlap = 6);

struct CurvatureReport {
  double fake = 0.0;       // dA + A ^ A - tau_*(B), operator norm
  double threeform = 0.0;  // dB + A ^ B - B ^ A, modulo exact terms
  double max() const { return std::max(fake, threeform); }
};

// Curvature residuals of chart i's connection pair over sampled points.
CurvatureReport curvatures(const DifferentialCocycle& D, int chart,
                           int samples = 24);

// Assembles the differential cocycle carried by a family of flat local
// systems glued by chain-map transitions: A_i and B_i are the stored degree 1
// and 2 connection components, phi and a vanish. Each local system must pass
// its flatness check and each transition must be chain-map valued and relate
// the neighbouring connection forms by the gauge identities
//   w1_j = g^{-1} w1_i g + g^{-1} dg,   w2_j = g^{-1} w2_i g
// at sampled overlap points; violations raise PreconditionError with the
// offending overlap and residual in the message.
DifferentialCocycle frame_cocycle(
    const std::vector<Superconnection>& local_systems,
    const std::map<std::pair<int, int>, GradedPolyMap>& transitions,
    double flat_tol = 1e-8, double gauge_tol = 1e-8,
    int samples_per_overlap = 6);

// Points and arrows of the local groupoid model built from a cocycle: objects
// are (chart, base point, group element), morphisms carry a degree -1 element
// h and a group element g, with
//   s(i,j,x,h,g) = (j,x,g),   t(i,j,x,h,g) = (i,x, g_ij(x)^{-1} tau(h) g).
struct LocalGroupoidObject {
  int i = 0;
  Vector x;
  GradedLinearMap g;
};

struct LocalGroupoidElement {
  int i = 0, j = 0;
  Vector x;
  GradedLinearMap h, g;
};

class LocalGroupoid {
public:
  LocalGroupoid(Cover cover, GammaCocycle cocycle, CochainComplex complex);

  const CrossedModule& crossed() const { return cm_; }
  const GammaCocycle& cocycle() const { return cocycle_; }

  LocalGroupoidObject source(const LocalGroupoidElement& m) const;
  LocalGroupoidObject target(const LocalGroupoidElement& m) const;
  LocalGroupoidElement identity(const LocalGroupoidObject& o) const;

  // Composition of m2 after m1. Requires m2.j == m1.i, coincident base
  // points (StructuralError otherwise) and source/target compatibility
  //   m2.g = g_{m1.i m1.j}(x)^{-1} tau(m1.h) m1.g
  // within tol (PreconditionError otherwise). The composite is
  //   (m2.i, m1.j, x, a(x) * alpha(g_jk(x), m2.h) * m1.h, m1.g).
  LocalGroupoidElement compose(const LocalGroupoidElement& m2,
                               const LocalGroupoidElement& m1,
                               double tol = 1e-9) const;

  // Right action of the structure 2-group: gp on objects, (hp, gp) on
  // morphisms via h -> h * alpha(g, hp).
  LocalGroupoidObject act(const LocalGroupoidObject& o,
                          const GradedLinearMap& gp) const;
  LocalGroupoidElement act(const LocalGroupoidElement& m,
                           const GradedLinearMap& hp,
                           const GradedLinearMap& gp) const;

private:
  Cover cover_;
  GammaCocycle cocycle_;
  CrossedModule cm_;

  void check_membership(int i, int j, const Vector& x) const;
};

// Pointwise evaluators of the three connection forms on the local model:
//   object 1-form   (x,g;v,xi)      -> g^{-1} A_i(v) g + g^{-1} xi
//   morphism 1-form (x,h,g;v,eta,xi)-> g^{-1} [ Ad_{h^{-1}}(phi_ij(v))
//                                        + alpha_tilde_star(h, A_j(v))
//                                        + theta_H(h; eta) ] g
//   object 2-form   (x,g;u,v)       -> -g^{-1} B_i(u,v) g
// with theta_H the left Maurer-Cartan translation.
class ConnectionForms {
public:
  explicit ConnectionForms(const DifferentialCocycle& D);

  GradedLinearMap object_form(int i, const Vector& x, const GradedLinearMap& g,
                              const Vector& v, const GradedLinearMap& xi) const;
  GradedLinearMap morphism_form(int i, int j, const Vector& x,
                                const GradedLinearMap& h,
                                const GradedLinearMap& g, const Vector& v,
                                const GradedLinearMap& eta,
                                const GradedLinearMap& xi) const;
  GradedLinearMap object_two_form(int i, const Vector& x,
                                  const GradedLinearMap& g, const Vector& u,
                                  const Vector& v) const;

private:
  const DifferentialCocycle* D_;
  CrossedModule cm_;
};

struct EquivarianceReport {
  double object_form = 0.0;
  double morphism_form = 0.0;
  double object_two_form = 0.0;
  double max() const {
    return std::max(object_form, std::max(morphism_form, object_two_form));
  }
};

// Two-sided spot check of the three equivariance equations a connection must
// satisfy under the structure group action, on deterministically sampled
// points, group elements and tangents of the pair overlap (i, j). Left sides
// evaluate the forms after the action with product-rule pushforwards of the
// tangents; right sides apply the displayed adjoint and Maurer-Cartan
// corrections to the values before the action.
EquivarianceReport connection_equivariance(const DifferentialCocycle& D, int i,
                                           int j, int samples = 12,
                                           std::uint64_t seed = 2026);

struct CoverTransportResult {
  GradedLinearMap value;
  int steps = 0;
  double est_error = 0.0;
};

// Parallel transport along a chain of chart-resident path legs, inserting the
// transition g_{next,current} evaluated at each crossing point. Consecutive
// legs must abut (PreconditionError) and every crossing point must lie in
// both charts (DomainError). The result is invariant under refining a leg
// into sub-legs within one chart and under moving a crossing inside the
// overlap when the cocycle is consistent.
CoverTransportResult transport_cover(
    const DifferentialCocycle& D,
    const std::vector<std::pair<int, PLPath>>& legs, int steps = 2000);

}  // namespace holab
