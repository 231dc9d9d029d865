#pragma once

#include <string>

#include "holab/forms.hpp"
#include "holab/simplex.hpp"

namespace holab {

/// End-to-end parallel transport g(1) along a path, where g solves
/// g' = -omega1(gamma'(t)) g with g(0) = id.
struct TransportResult {
  GradedLinearMap value;
  std::string method;
  int steps = 0;  // integration steps, or the series truncation order
  /// For the one-step integrator: step-halving estimate |g_N - g_{N/2}| / 15.
  /// For the series: the factorial tail bound max|a|^{N+1} / (N+1)!.
  double est_error = 0.0;
  /// Series only: the tail bound exceeded 1e-10, so comparisons against the
  /// integrator at the usual tolerances are not meaningful.
  bool tail_warning = false;
};

/// Degree -1 surface transport over a 2-simplex, together with the transports
/// along the two boundary paths joining v0 to v2. Values produced by
/// different methods represent the same class only modulo exact terms.
struct SurfaceResult {
  GradedLinearMap value;
  std::string method;
  GradedLinearMap g_gamma0;  // along the composite edge [v0,v1] then [v1,v2]
  GradedLinearMap g_gamma1;  // along the long edge [v0,v2]
};

/// Classical fourth-order one-step integration of g' = -omega1(gamma') g,
/// segment by segment. `steps` counts steps across the whole unit parameter
/// interval. Throws DomainError if the path leaves the chart or the result
/// fails to be invertible. Flatness of S is the caller's responsibility.
TransportResult transport_ode(const Superconnection& S, const PLPath& gamma,
                              int steps = 2000);

/// Truncated iterated-integral (Picard) series for the same transport:
/// value = sum_{k<=N} J_k(1) with J_k(t) the k-fold ordered integral of
/// a(t) = -omega1(gamma'(t)). Quadrature is composite Gauss-Legendre with
/// node-prefix integration, four panels per segment.
TransportResult transport_series(const Superconnection& S, const PLPath& gamma,
                                 int truncation = 12);

/// Surface transport by integrating, over the folded square,
///   h'(s) = K(s) + h(s) (d K(s) + K(s) d),  h(0) = 0,
/// where K(s) = int_0^1 g_s(t)^{-1} omega2(dt Sigma, ds Sigma) g_s(t) dt and
/// g_s is the fiber transport at height s. `t_points` is the Gauss-Legendre
/// node count per smooth fiber piece.
SurfaceResult surface_ode(const Superconnection& S, const Simplex2& sigma,
                          int s_steps = 128, int t_points = 32);

/// Same transport through the closed-form double integral
///   h(1) = (int int g_s(t)^{-1} omega2(..) g_s(t) Hol_s^{-1} dt ds) Hol_1,
/// evaluated with tensor-product Gauss-Legendre quadrature.
SurfaceResult surface_closed_form(const Superconnection& S,
                                  const Simplex2& sigma, int s_panels = 4,
                                  int t_points = 32);

/// Two-sided iterated-integral form: value = int int M_s(t) omega2(..) N_s(t),
/// where M' = M a, M(0) = id and N' = -a N, N(1) = id along each fiber. The
/// integrand never references h, so this is an independent evaluation path;
/// the result composed with g_gamma1 matches the other two methods modulo
/// exact terms.
SurfaceResult surface_chen(const Superconnection& S, const Simplex2& sigma,
                           int s_panels = 4, int t_points = 32);

/// Path representation: the inverse of the end-to-end transport, a map from
/// the fiber at gamma(1) to the fiber at gamma(0).
GradedLinearMap f1(const Superconnection& S, const PLPath& gamma);

/// Surface representation: the two-sided double integral of surface_chen.
GradedLinearMap f2(const Superconnection& S, const Simplex2& sigma);

/// Residual of the k = 2 structure equation
///   d f2 + f2 d = f1([v0,v1]) f1([v1,v2]) - f1([v0,v2]).
double structure_equation_check(const Superconnection& S,
                                const Simplex2& sigma);

/// Exactness of f2(sigma) - f2(sigma_prime) for two simplices sharing all
/// three boundary edges (checked by sampling; PreconditionError otherwise).
ExactnessResult homotopy_invariance_check(const Superconnection& S,
                                          const Simplex2& sigma,
                                          const Simplex2& sigma_prime);

/// Both operator orders of the boundary compatibility identity relating the
/// surface transport h to the edge transports. `residual` is
/// |g_gamma0 tau(h) - g_gamma1|, the order the surface integrator satisfies;
/// `residual_swapped` is |tau(h) g_gamma0 - g_gamma1|, reported for
/// diagnostics.
struct TauRelationResult {
  GradedLinearMap h;
  double residual = 0.0;
  double residual_swapped = 0.0;
};
TauRelationResult tau_relation(const Superconnection& S, const Simplex2& sigma,
                               int s_steps = 128);

}  // namespace holab
