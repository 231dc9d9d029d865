#include "holab/holonomy.hpp"

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "holab/core.hpp"
#include "holab/crossed.hpp"
#include "holab/quadrature.hpp"

namespace holab {

namespace {

using Coeff = std::function<GradedLinearMap(double)>;

// Classical fourth-order step for Y' = C(t) Y across [t0, t1]; t1 < t0 is
// allowed (backward integration).
GradedLinearMap advance_left(const Coeff& C, double t0, double t1, int nsteps,
                             GradedLinearMap Y) {
  const double h = (t1 - t0) / nsteps;
  for (int k = 0; k < nsteps; ++k) {
    const double t = t0 + k * h;
    const GradedLinearMap c1 = C(t);
    const GradedLinearMap c2 = C(t + 0.5 * h);
    const GradedLinearMap c3 = C(t + h);
    const GradedLinearMap k1 = compose(c1, Y);
    const GradedLinearMap k2 = compose(c2, Y + (0.5 * h) * k1);
    const GradedLinearMap k3 = compose(c2, Y + (0.5 * h) * k2);
    const GradedLinearMap k4 = compose(c3, Y + h * k3);
    Y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return Y;
}

// Same scheme for Y' = Y C(t).
GradedLinearMap advance_right(const Coeff& C, double t0, double t1, int nsteps,
                              GradedLinearMap Y) {
  const double h = (t1 - t0) / nsteps;
  for (int k = 0; k < nsteps; ++k) {
    const double t = t0 + k * h;
    const GradedLinearMap c1 = C(t);
    const GradedLinearMap c2 = C(t + 0.5 * h);
    const GradedLinearMap c3 = C(t + h);
    const GradedLinearMap k1 = compose(Y, c1);
    const GradedLinearMap k2 = compose(Y + (0.5 * h) * k1, c2);
    const GradedLinearMap k3 = compose(Y + (0.5 * h) * k2, c2);
    const GradedLinearMap k4 = compose(Y + h * k3, c3);
    Y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return Y;
}

// Simultaneous step for the fiber transport and its inverse,
//   g' = -a(t) g,   M' = M a(t),
// sharing the coefficient evaluations between the two equations.
void advance_pair(const Coeff& a_of, double t0, double t1, int nsteps,
                  GradedLinearMap& g, GradedLinearMap& M) {
  const double h = (t1 - t0) / nsteps;
  for (int k = 0; k < nsteps; ++k) {
    const double t = t0 + k * h;
    const GradedLinearMap a1 = a_of(t);
    const GradedLinearMap a2 = a_of(t + 0.5 * h);
    const GradedLinearMap a3 = a_of(t + h);
    const GradedLinearMap k1g = -1.0 * compose(a1, g);
    const GradedLinearMap k1m = compose(M, a1);
    const GradedLinearMap k2g = -1.0 * compose(a2, g + (0.5 * h) * k1g);
    const GradedLinearMap k2m = compose(M + (0.5 * h) * k1m, a2);
    const GradedLinearMap k3g = -1.0 * compose(a2, g + (0.5 * h) * k2g);
    const GradedLinearMap k3m = compose(M + (0.5 * h) * k2m, a2);
    const GradedLinearMap k4g = -1.0 * compose(a3, g + h * k3g);
    const GradedLinearMap k4m = compose(M + h * k3m, a3);
    g += (h / 6.0) * (k1g + 2.0 * k2g + 2.0 * k3g + k4g);
    M += (h / 6.0) * (k1m + 2.0 * k2m + 2.0 * k3m + k4m);
  }
}

void require_path_in_chart(const Superconnection& S, const PLPath& gamma) {
  if (gamma.dim() != S.chart.dim())
    throw StructuralError("path dimension does not match chart " + S.chart.id());
  for (int i = 0; i < gamma.segment_count(); ++i)
    for (int k = 0; k <= 16; ++k)
      if (!S.chart.contains(gamma.segment(i).eval(k / 16.0)))
        throw DomainError("path leaves chart " + S.chart.id());
}

void require_simplex_in_chart(const Superconnection& S, const Simplex2& sigma) {
  if (sigma.dim() != S.chart.dim())
    throw StructuralError("simplex dimension does not match chart " + S.chart.id());
  for (int i = 0; i <= 12; ++i)
    for (int j = 0; j <= i; ++j)
      if (!S.chart.contains(sigma.eval(i / 12.0, j / 12.0)))
        throw DomainError("simplex leaves chart " + S.chart.id());
}

GradedLinearMap run_transport(const Superconnection& S, const PLPath& gamma,
                              int per_segment) {
  GradedLinearMap g = GradedLinearMap::identity(S.complex.space());
  for (int i = 0; i < gamma.segment_count(); ++i) {
    const PathSegment& seg = gamma.segment(i);
    const Coeff c = [&](double u) {
      return -1.0 * S.omega1.eval(seg.eval(u), {seg.velocity(u)});
    };
    g = advance_left(c, 0.0, 1.0, per_segment, std::move(g));
  }
  return g;
}

// Per-piece coordinate derivatives of a folded square, precomputed so the
// integrators do not rebuild derivative polynomials at every stage.
struct PieceJet {
  const BigonPiece* piece;
  std::vector<Polynomial> dt, ds;
};

std::vector<PieceJet> make_jets(const Bigon& bg) {
  std::vector<PieceJet> jets;
  jets.reserve(bg.piece_count());
  for (int i = 0; i < bg.piece_count(); ++i) {
    const BigonPiece& p = bg.piece(i);
    PieceJet jet{&p, {}, {}};
    for (const Polynomial& c : p.map) {
      jet.dt.push_back(c.derivative(1));
      jet.ds.push_back(c.derivative(0));
    }
    jets.push_back(std::move(jet));
  }
  return jets;
}

GradedLinearMap a_eval(const Superconnection& S, const PieceJet& jet, double s,
                       double t) {
  const double xs[2] = {s, t};
  const int n = static_cast<int>(jet.piece->map.size());
  Vector x(n), vt(n);
  for (int i = 0; i < n; ++i) {
    x(i) = jet.piece->map[i](xs);
    vt(i) = jet.dt[i](xs);
  }
  return S.omega1.eval(x, {vt});
}

GradedLinearMap b_eval(const Superconnection& S, const PieceJet& jet, double s,
                       double t) {
  const double xs[2] = {s, t};
  const int n = static_cast<int>(jet.piece->map.size());
  Vector x(n), vt(n), vs(n);
  for (int i = 0; i < n; ++i) {
    x(i) = jet.piece->map[i](xs);
    vt(i) = jet.dt[i](xs);
    vs(i) = jet.ds[i](xs);
  }
  return S.omega2.eval(x, {vt, vs});
}

struct FiberPanel {
  int piece;
  double lo, hi;
};

std::vector<FiberPanel> fiber_panels(const Bigon& bg, double s) {
  std::vector<FiberPanel> out;
  for (int i = 0; i < bg.piece_count(); ++i) {
    const double lo = bg.piece(i).lo(s), hi = bg.piece(i).hi(s);
    if (hi - lo > 1e-13) out.push_back({i, lo, hi});
  }
  return out;
}

constexpr double kFiberStepsPerUnit = 200.0;

int fiber_steps(double gap) {
  return std::max(1, static_cast<int>(std::ceil(std::abs(gap) * kFiberStepsPerUnit)));
}

// K(s) = int_0^1 g_s(t)^{-1} omega2(dt, ds) g_s(t) dt over the fiber at s.
GradedLinearMap fiber_integral(const Superconnection& S,
                               const std::vector<PieceJet>& jets,
                               const Bigon& bg, double s, int t_points) {
  const QuadRule& rule = gauss_legendre(t_points);
  const GradedVectorSpace& sp = S.complex.space();
  GradedLinearMap K = GradedLinearMap::zero(sp, sp, -1);
  GradedLinearMap g = GradedLinearMap::identity(sp);
  GradedLinearMap M = GradedLinearMap::identity(sp);
  for (const FiberPanel& fp : fiber_panels(bg, s)) {
    const PieceJet& jet = jets[fp.piece];
    const Coeff a_of = [&](double t) { return a_eval(S, jet, s, t); };
    double prev = fp.lo;
    for (int j = 0; j < t_points; ++j) {
      const double tj = fp.lo + 0.5 * (rule.nodes(j) + 1.0) * (fp.hi - fp.lo);
      advance_pair(a_of, prev, tj, fiber_steps(tj - prev), g, M);
      prev = tj;
      const double wj = 0.5 * rule.weights(j) * (fp.hi - fp.lo);
      K += wj * compose(compose(M, b_eval(S, jet, s, tj)), g);
    }
    advance_pair(a_of, prev, fp.hi, fiber_steps(fp.hi - prev), g, M);
  }
  return K;
}

struct SNode {
  double s, w;
};

std::vector<SNode> s_nodes(int s_panels, int points) {
  const QuadRule& rule = gauss_legendre(points);
  std::vector<SNode> out;
  out.reserve(static_cast<std::size_t>(s_panels) * points);
  for (int p = 0; p < s_panels; ++p) {
    const double lo = static_cast<double>(p) / s_panels;
    const double hi = static_cast<double>(p + 1) / s_panels;
    for (int j = 0; j < points; ++j)
      out.push_back({lo + 0.5 * (rule.nodes(j) + 1.0) * (hi - lo),
                     0.5 * rule.weights(j) * (hi - lo)});
  }
  return out;
}

std::pair<GradedLinearMap, GradedLinearMap> edge_transports(
    const Superconnection& S, const Simplex2& sigma) {
  return {transport_ode(S, composite_edge(sigma)).value,
          transport_ode(S, face(sigma, 1)).value};
}

}  // namespace

TransportResult transport_ode(const Superconnection& S, const PLPath& gamma,
                              int steps) {
  if (steps < 2) throw StructuralError("transport_ode: too few steps");
  require_path_in_chart(S, gamma);
  const int nseg = gamma.segment_count();
  const int per_segment =
      std::max(2, static_cast<int>(std::llround(static_cast<double>(steps) / nseg)));
  GradedLinearMap full = run_transport(S, gamma, per_segment);
  GradedLinearMap half = run_transport(S, gamma, std::max(1, per_segment / 2));
  if (!(max_condition_number(full) < 1e12))
    throw DomainError("transport is not invertible (condition number above 1e12)");
  TransportResult result{std::move(full), "ode", per_segment * nseg, 0.0, false};
  result.est_error = norm(result.value - half) / 15.0;
  return result;
}

TransportResult transport_series(const Superconnection& S, const PLPath& gamma,
                                 int truncation) {
  if (truncation < 0) throw StructuralError("transport_series: negative order");
  require_path_in_chart(S, gamma);
  const int nseg = gamma.segment_count();
  constexpr int kPanelsPerSegment = 4;
  constexpr int kPoints = 32;
  const QuadRule& rule = gauss_legendre(kPoints);
  const Eigen::MatrixXd& prefix = gauss_legendre_prefix(kPoints);
  const GradedVectorSpace& sp = S.complex.space();

  struct Panel {
    double half;  // half-width in the global parameter
    std::vector<GradedLinearMap> a;
  };
  std::vector<Panel> panels;
  panels.reserve(static_cast<std::size_t>(nseg) * kPanelsPerSegment);
  double a_max = 0.0;
  for (int i = 0; i < nseg; ++i) {
    const PathSegment& seg = gamma.segment(i);
    for (int q = 0; q < kPanelsPerSegment; ++q) {
      const double ulo = static_cast<double>(q) / kPanelsPerSegment;
      const double uhi = static_cast<double>(q + 1) / kPanelsPerSegment;
      Panel panel;
      panel.half = 0.5 * (uhi - ulo) / nseg;
      panel.a.reserve(kPoints);
      for (int j = 0; j < kPoints; ++j) {
        const double u = ulo + 0.5 * (rule.nodes(j) + 1.0) * (uhi - ulo);
        // velocity with respect to the global parameter
        const Vector v = nseg * seg.velocity(u);
        GradedLinearMap a = -1.0 * S.omega1.eval(seg.eval(u), {v});
        a_max = std::max(a_max, norm(a));
        panel.a.push_back(std::move(a));
      }
      panels.push_back(std::move(panel));
    }
  }

  const GradedLinearMap id = GradedLinearMap::identity(sp);
  const GradedLinearMap zero = GradedLinearMap::zero(sp, sp, 0);
  std::vector<std::vector<GradedLinearMap>> J_prev(
      panels.size(), std::vector<GradedLinearMap>(kPoints, id));
  GradedLinearMap value = id;
  for (int k = 1; k <= truncation; ++k) {
    std::vector<std::vector<GradedLinearMap>> J(
        panels.size(), std::vector<GradedLinearMap>(kPoints, zero));
    GradedLinearMap carry = zero;
    for (std::size_t p = 0; p < panels.size(); ++p) {
      std::vector<GradedLinearMap> integrand;
      integrand.reserve(kPoints);
      for (int j = 0; j < kPoints; ++j)
        integrand.push_back(compose(panels[p].a[j], J_prev[p][j]));
      for (int i = 0; i < kPoints; ++i) {
        GradedLinearMap v = carry;
        for (int j = 0; j < kPoints; ++j)
          v += (panels[p].half * prefix(i, j)) * integrand[j];
        J[p][i] = std::move(v);
      }
      for (int j = 0; j < kPoints; ++j)
        carry += (panels[p].half * rule.weights(j)) * integrand[j];
    }
    value += carry;
    J_prev = std::move(J);
  }

  const double tail =
      std::pow(a_max, truncation + 1) / std::tgamma(truncation + 2.0);
  return {std::move(value), "series", truncation, tail, tail > 1e-10};
}

SurfaceResult surface_ode(const Superconnection& S, const Simplex2& sigma,
                          int s_steps, int t_points) {
  if (s_steps < 1 || t_points < 2)
    throw StructuralError("surface_ode: invalid discretization");
  require_simplex_in_chart(S, sigma);
  const Bigon bg = oriented_bigon(sigma);
  const std::vector<PieceJet> jets = make_jets(bg);
  const GradedVectorSpace& sp = S.complex.space();
  const GradedLinearMap& d = S.complex.differential();

  // K at the grid points and half-steps, fibers independent so parallel.
  const int count = 2 * s_steps + 1;
  std::vector<GradedLinearMap> K(count, GradedLinearMap::zero(sp, sp, -1));
  std::vector<GradedLinearMap> tauK(count, GradedLinearMap::zero(sp, sp, 0));
  parallel_for(static_cast<std::size_t>(count), [&](std::size_t j) {
    const double s = static_cast<double>(j) / (2 * s_steps);
    K[j] = fiber_integral(S, jets, bg, s, t_points);
    tauK[j] = compose(d, K[j]) + compose(K[j], d);
  });

  const auto rhs = [](const GradedLinearMap& Ks, const GradedLinearMap& tKs,
                      const GradedLinearMap& h) {
    return Ks + compose(h, tKs);
  };
  GradedLinearMap h = GradedLinearMap::zero(sp, sp, -1);
  const double ds = 1.0 / s_steps;
  for (int i = 0; i < s_steps; ++i) {
    const GradedLinearMap k1 = rhs(K[2 * i], tauK[2 * i], h);
    const GradedLinearMap k2 = rhs(K[2 * i + 1], tauK[2 * i + 1], h + (0.5 * ds) * k1);
    const GradedLinearMap k3 = rhs(K[2 * i + 1], tauK[2 * i + 1], h + (0.5 * ds) * k2);
    const GradedLinearMap k4 = rhs(K[2 * i + 2], tauK[2 * i + 2], h + ds * k3);
    h += (ds / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

  auto [g0, g1] = edge_transports(S, sigma);
  return {std::move(h), "ode", std::move(g0), std::move(g1)};
}

SurfaceResult surface_closed_form(const Superconnection& S,
                                  const Simplex2& sigma, int s_panels,
                                  int t_points) {
  if (s_panels < 1 || t_points < 2)
    throw StructuralError("surface_closed_form: invalid discretization");
  require_simplex_in_chart(S, sigma);
  const Bigon bg = oriented_bigon(sigma);
  const std::vector<PieceJet> jets = make_jets(bg);
  const GradedVectorSpace& sp = S.complex.space();
  const QuadRule& rule = gauss_legendre(t_points);
  const std::vector<SNode> outer = s_nodes(s_panels, t_points);

  std::vector<GradedLinearMap> contrib(outer.size(),
                                       GradedLinearMap::zero(sp, sp, -1));
  parallel_for(outer.size(), [&](std::size_t idx) {
    const double s = outer[idx].s;
    GradedLinearMap inner = GradedLinearMap::zero(sp, sp, -1);
    GradedLinearMap g = GradedLinearMap::identity(sp);
    GradedLinearMap M = GradedLinearMap::identity(sp);
    for (const FiberPanel& fp : fiber_panels(bg, s)) {
      const PieceJet& jet = jets[fp.piece];
      const Coeff a_of = [&](double t) { return a_eval(S, jet, s, t); };
      double prev = fp.lo;
      for (int j = 0; j < t_points; ++j) {
        const double tj = fp.lo + 0.5 * (rule.nodes(j) + 1.0) * (fp.hi - fp.lo);
        advance_pair(a_of, prev, tj, fiber_steps(tj - prev), g, M);
        prev = tj;
        const double wj = 0.5 * rule.weights(j) * (fp.hi - fp.lo);
        inner += wj * compose(compose(M, b_eval(S, jet, s, tj)), g);
      }
      advance_pair(a_of, prev, fp.hi, fiber_steps(fp.hi - prev), g, M);
    }
    // After the full sweep M holds the inverse of the fiber holonomy.
    contrib[idx] = outer[idx].w * compose(inner, M);
  });

  GradedLinearMap integral = GradedLinearMap::zero(sp, sp, -1);
  for (const GradedLinearMap& c : contrib) integral += c;

  auto [g0, g1] = edge_transports(S, sigma);
  GradedLinearMap value = compose(integral, g1);
  return {std::move(value), "closed_form", std::move(g0), std::move(g1)};
}

SurfaceResult surface_chen(const Superconnection& S, const Simplex2& sigma,
                           int s_panels, int t_points) {
  if (s_panels < 1 || t_points < 2)
    throw StructuralError("surface_chen: invalid discretization");
  require_simplex_in_chart(S, sigma);
  const Bigon bg = oriented_bigon(sigma);
  const std::vector<PieceJet> jets = make_jets(bg);
  const GradedVectorSpace& sp = S.complex.space();
  const QuadRule& rule = gauss_legendre(t_points);
  const std::vector<SNode> outer = s_nodes(s_panels, t_points);

  std::vector<GradedLinearMap> contrib(outer.size(),
                                       GradedLinearMap::zero(sp, sp, -1));
  parallel_for(outer.size(), [&](std::size_t idx) {
    const double s = outer[idx].s;
    const std::vector<FiberPanel> panels = fiber_panels(bg, s);

    // Forward sweep: M' = M a, M(0) = id, recorded at the quadrature nodes
    // together with the two-form values and weights.
    std::vector<double> ts, ws;
    std::vector<int> piece_of;
    std::vector<GradedLinearMap> Ms, bs;
    {
      GradedLinearMap M = GradedLinearMap::identity(sp);
      for (const FiberPanel& fp : panels) {
        const PieceJet& jet = jets[fp.piece];
        const Coeff right = [&](double t) { return a_eval(S, jet, s, t); };
        double prev = fp.lo;
        for (int j = 0; j < t_points; ++j) {
          const double tj = fp.lo + 0.5 * (rule.nodes(j) + 1.0) * (fp.hi - fp.lo);
          M = advance_right(right, prev, tj, fiber_steps(tj - prev), std::move(M));
          prev = tj;
          ts.push_back(tj);
          ws.push_back(0.5 * rule.weights(j) * (fp.hi - fp.lo));
          piece_of.push_back(fp.piece);
          Ms.push_back(M);
          bs.push_back(b_eval(S, jet, s, tj));
        }
        M = advance_right(right, prev, fp.hi, fiber_steps(fp.hi - prev),
                          std::move(M));
      }
    }

    // Backward sweep: N' = -a N, N(1) = id, visiting the nodes in reverse.
    std::vector<GradedLinearMap> Ns(ts.size(), GradedLinearMap::identity(sp));
    {
      GradedLinearMap N = GradedLinearMap::identity(sp);
      std::size_t node = ts.size();
      for (auto fp = panels.rbegin(); fp != panels.rend(); ++fp) {
        const PieceJet& jet = jets[fp->piece];
        const Coeff c = [&](double t) { return -1.0 * a_eval(S, jet, s, t); };
        double prev = fp->hi;
        for (int j = t_points - 1; j >= 0; --j) {
          --node;
          const double tj = ts[node];
          N = advance_left(c, prev, tj, fiber_steps(prev - tj), std::move(N));
          prev = tj;
          Ns[node] = N;
        }
        N = advance_left(c, prev, fp->lo, fiber_steps(prev - fp->lo),
                         std::move(N));
      }
    }

    GradedLinearMap inner = GradedLinearMap::zero(sp, sp, -1);
    for (std::size_t n = 0; n < ts.size(); ++n)
      inner += ws[n] * compose(compose(Ms[n], bs[n]), Ns[n]);
    contrib[idx] = outer[idx].w * inner;
  });

  GradedLinearMap value = GradedLinearMap::zero(sp, sp, -1);
  for (const GradedLinearMap& c : contrib) value += c;

  auto [g0, g1] = edge_transports(S, sigma);
  return {std::move(value), "chen", std::move(g0), std::move(g1)};
}

GradedLinearMap f1(const Superconnection& S, const PLPath& gamma) {
  return inverse(transport_ode(S, gamma).value);
}

GradedLinearMap f2(const Superconnection& S, const Simplex2& sigma) {
  return surface_chen(S, sigma).value;
}

double structure_equation_check(const Superconnection& S,
                                const Simplex2& sigma) {
  const GradedLinearMap h = f2(S, sigma);
  const GradedLinearMap& d = S.complex.differential();
  const GradedLinearMap lhs = compose(d, h) + compose(h, d);
  const GradedLinearMap q = f1(S, front_edge(sigma));
  const GradedLinearMap p = f1(S, back_edge(sigma));
  const GradedLinearMap l = f1(S, face(sigma, 1));
  return norm(lhs - (compose(q, p) - l));
}

ExactnessResult homotopy_invariance_check(const Superconnection& S,
                                          const Simplex2& sigma,
                                          const Simplex2& sigma_prime) {
  for (int i = 0; i < 3; ++i) {
    const PLPath a = face(sigma, i);
    const PLPath b = face(sigma_prime, i);
    for (int k = 0; k <= 16; ++k)
      if ((a.eval(k / 16.0) - b.eval(k / 16.0)).norm() > 1e-9)
        throw PreconditionError(
            "simplices do not share their boundary edges");
  }
  return S.complex.solve_exactness(f2(S, sigma) - f2(S, sigma_prime));
}

TauRelationResult tau_relation(const Superconnection& S, const Simplex2& sigma,
                               int s_steps) {
  const SurfaceResult r = surface_ode(S, sigma, s_steps);
  const CrossedModule cm(S.complex);
  const GradedLinearMap th = cm.tau(r.value);
  TauRelationResult out{r.value, 0.0, 0.0};
  out.residual = norm(compose(r.g_gamma0, th) - r.g_gamma1);
  out.residual_swapped = norm(compose(th, r.g_gamma0) - r.g_gamma1);
  return out;
}

}  // namespace holab
