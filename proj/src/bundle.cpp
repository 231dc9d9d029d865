#include "holab/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace holab {

namespace {

Vector axis_vector(int n, int k) {
  Vector v = Vector::Zero(n);
  v(k) = 1.0;
  return v;
}

GradedLinearMap conj(const GradedLinearMap& g, const GradedLinearMap& X) {
  return compose(inverse(g), compose(X, g));
}

std::string overlap_label(const Cover& cover, const std::vector<int>& idx) {
  std::ostringstream out;
  for (std::size_t a = 0; a < idx.size(); ++a) {
    if (a) out << ",";
    out << cover.chart(idx[a]).id();
  }
  return out.str();
}

}  // namespace

Cover::Cover(std::vector<Chart> charts) : charts_(std::move(charts)) {
  if (charts_.empty()) throw StructuralError("cover needs at least one chart");
  const int n = charts_[0].dim();
  for (const Chart& c : charts_) {
    if (c.dim() != n)
      throw StructuralError("cover charts must share the ambient dimension");
  }
  const int m = size();
  auto record = [&](std::vector<int> idx, std::vector<Overlap>& into) {
    auto box = intersection(idx);
    if (box) into.push_back(*box);
  };
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      record({i, j}, pairs_);
      for (int k = j + 1; k < m; ++k) {
        record({i, j, k}, triples_);
        for (int l = k + 1; l < m; ++l) record({i, j, k, l}, quadruples_);
      }
    }
}

int Cover::dim() const { return charts_[0].dim(); }

const Chart& Cover::chart(int i) const {
  if (i < 0 || i >= size()) throw StructuralError("chart index out of range");
  return charts_[static_cast<std::size_t>(i)];
}

std::optional<Overlap> Cover::intersection(const std::vector<int>& indices) const {
  if (indices.empty()) return std::nullopt;
  const int n = dim();
  Overlap o;
  o.indices = indices;
  o.lo.assign(static_cast<std::size_t>(n), 0.0);
  o.hi.assign(static_cast<std::size_t>(n), 0.0);
  for (int a = 0; a < n; ++a) {
    double lo = chart(indices[0]).lo()[static_cast<std::size_t>(a)];
    double hi = chart(indices[0]).hi()[static_cast<std::size_t>(a)];
    for (std::size_t b = 1; b < indices.size(); ++b) {
      lo = std::max(lo, chart(indices[b]).lo()[static_cast<std::size_t>(a)]);
      hi = std::min(hi, chart(indices[b]).hi()[static_cast<std::size_t>(a)]);
    }
    if (!(hi - lo > 0.0)) return std::nullopt;
    o.lo[static_cast<std::size_t>(a)] = lo;
    o.hi[static_cast<std::size_t>(a)] = hi;
  }
  return o;
}

std::vector<Vector> overlap_samples(const Overlap& o, int count) {
  std::ostringstream id;
  id << "overlap";
  for (int i : o.indices) id << "_" << i;
  Chart box(id.str(), o.lo, o.hi);
  return chart_samples(box, count);
}

GammaCocycle::GammaCocycle(GradedVectorSpace space, int nvars)
    : space_(std::move(space)), nvars_(nvars) {
  if (nvars_ <= 0) throw StructuralError("cocycle needs a positive dimension");
}

void GammaCocycle::set_transition(int i, int j, GradedPolyMap g) {
  if (i == j) throw StructuralError("transition indices must differ");
  if (g.degree() != 0 || !(g.source() == space_) || !(g.target() == space_) ||
      g.nvars() != nvars_)
    throw StructuralError("transition must be a degree 0 polynomial map on the cover coordinates");
  g_.insert_or_assign({i, j}, std::move(g));
}

void GammaCocycle::set_a(int i, int j, int k, GradedPolyMap a) {
  if (a.degree() != -1 || !(a.source() == space_) || !(a.target() == space_) ||
      a.nvars() != nvars_)
    throw StructuralError("triple cocycle entry must be a degree -1 polynomial map");
  a_.insert_or_assign(std::array<int, 3>{i, j, k}, std::move(a));
}

bool GammaCocycle::has_transition(int i, int j) const {
  return i == j || g_.count({i, j}) > 0 || g_.count({j, i}) > 0;
}

bool GammaCocycle::has_a(int i, int j, int k) const {
  return a_.count({i, j, k}) > 0;
}

GradedLinearMap GammaCocycle::transition_at(int i, int j, const Vector& x) const {
  if (i == j) return GradedLinearMap::identity(space_);
  auto it = g_.find({i, j});
  if (it != g_.end()) return it->second.eval(x);
  auto rev = g_.find({j, i});
  if (rev != g_.end()) return inverse(rev->second.eval(x));
  std::ostringstream msg;
  msg << "no transition stored for chart pair (" << i << "," << j << ")";
  throw StructuralError(msg.str());
}

GradedLinearMap GammaCocycle::transition_derivative_at(int i, int j, int axis,
                                                       const Vector& x) const {
  if (i == j) return GradedLinearMap::zero(space_, space_, 0);
  auto it = g_.find({i, j});
  if (it != g_.end()) return it->second.derivative(axis).eval(x);
  auto rev = g_.find({j, i});
  if (rev != g_.end()) {
    GradedLinearMap gi = inverse(rev->second.eval(x));
    GradedLinearMap dg = rev->second.derivative(axis).eval(x);
    return -1.0 * compose(gi, compose(dg, gi));
  }
  std::ostringstream msg;
  msg << "no transition stored for chart pair (" << i << "," << j << ")";
  throw StructuralError(msg.str());
}

GradedLinearMap GammaCocycle::a_at(int i, int j, int k, const Vector& x) const {
  auto it = a_.find({i, j, k});
  if (it != a_.end()) return it->second.eval(x);
  return GradedLinearMap::zero(space_, space_, -1);
}

GradedLinearMap GammaCocycle::a_derivative_at(int i, int j, int k, int axis,
                                              const Vector& x) const {
  auto it = a_.find({i, j, k});
  if (it != a_.end()) return it->second.derivative(axis).eval(x);
  return GradedLinearMap::zero(space_, space_, -1);
}

CocycleReport validate_cocycle(const Cover& cover, const GammaCocycle& cocycle,
                               const CochainComplex& complex,
                               int samples_per_overlap) {
  CrossedModule cm(complex);
  CocycleReport report;
  for (const Overlap& t : cover.triples()) {
    const int i = t.indices[0], j = t.indices[1], k = t.indices[2];
    for (const Vector& x : overlap_samples(t, samples_per_overlap)) {
      GradedLinearMap lhs = cocycle.transition_at(i, k, x);
      GradedLinearMap rhs =
          compose(cm.tau(cocycle.a_at(i, j, k, x)),
                  compose(cocycle.transition_at(i, j, x),
                          cocycle.transition_at(j, k, x)));
      report.g_residual = std::max(report.g_residual, norm(lhs - rhs));
    }
  }
  for (const Overlap& q : cover.quadruples()) {
    const int i = q.indices[0], j = q.indices[1], k = q.indices[2],
              l = q.indices[3];
    for (const Vector& x : overlap_samples(q, samples_per_overlap)) {
      GradedLinearMap lhs =
          cm.h_mul(cocycle.a_at(i, j, l, x), cocycle.a_at(j, k, l, x));
      GradedLinearMap rhs =
          cm.h_mul(cocycle.a_at(i, k, l, x),
                   cm.alpha(cocycle.transition_at(k, l, x),
                            cocycle.a_at(i, j, k, x)));
      report.a_residual =
          std::max(report.a_residual, cm.distance_mod_exact(lhs, rhs));
    }
  }
  return report;
}

const EndValuedForm& DifferentialCocycle::A_at(int i) const {
  auto it = A.find(i);
  if (it == A.end())
    throw StructuralError("no connection 1-form stored for this chart");
  return it->second;
}

const EndValuedForm& DifferentialCocycle::B_at(int i) const {
  auto it = B.find(i);
  if (it == B.end())
    throw StructuralError("no connection 2-form stored for this chart");
  return it->second;
}

EndValuedForm DifferentialCocycle::phi_or_zero(int i, int j) const {
  auto it = phi.find({i, j});
  if (it != phi.end()) return it->second;
  return EndValuedForm(complex.space(), cover.dim(), 1, -1);
}

DifferentialReport validate_differential(const DifferentialCocycle& D,
                                         int samples_per_overlap) {
  CrossedModule cm(D.complex);
  const int n = D.cover.dim();
  DifferentialReport report;

  for (const Overlap& p : D.cover.pairs()) {
    const int i = p.indices[0], j = p.indices[1];
    const EndValuedForm& Ai = D.A_at(i);
    const EndValuedForm& Aj = D.A_at(j);
    const EndValuedForm& Bi = D.B_at(i);
    const EndValuedForm& Bj = D.B_at(j);
    EndValuedForm ph = D.phi_or_zero(i, j);
    EndValuedForm dph = exterior_d(ph);
    for (const Vector& x : overlap_samples(p, samples_per_overlap)) {
      GradedLinearMap g = D.cocycle.transition_at(i, j, x);
      GradedLinearMap gi = inverse(g);
      for (int v = 0; v < n; ++v) {
        Vector ev = axis_vector(n, v);
        GradedLinearMap lhs =
            Aj.eval(x, {ev}) + cm.tau_star(ph.eval(x, {ev}));
        GradedLinearMap rhs =
            compose(gi, compose(Ai.eval(x, {ev}), g)) +
            compose(gi, D.cocycle.transition_derivative_at(i, j, v, x));
        report.dc1 = std::max(report.dc1, norm(lhs - rhs));
      }
      for (int u = 0; u < n; ++u) {
        Vector eu = axis_vector(n, u);
        GradedLinearMap phu = ph.eval(x, {eu});
        GradedLinearMap Au = Aj.eval(x, {eu});
        for (int v = u + 1; v < n; ++v) {
          Vector ev = axis_vector(n, v);
          GradedLinearMap phv = ph.eval(x, {ev});
          GradedLinearMap Av = Aj.eval(x, {ev});
          GradedLinearMap lhs = conj(g, Bi.eval(x, {eu, ev}));
          // Quadratic terms: the degree -1 bracket of the phi values and the
          // infinitesimal action of A on phi, antisymmetrised in (u, v).
          GradedLinearMap quad =
              compose(phu, cm.tau_star(phv)) - compose(phv, cm.tau_star(phu));
          GradedLinearMap act =
              cm.alpha_star(Au, phv) - cm.alpha_star(Av, phu);
          GradedLinearMap rhs =
              Bj.eval(x, {eu, ev}) + dph.eval(x, {eu, ev}) + quad + act;
          report.dc2 = std::max(report.dc2, cm.distance_mod_exact(lhs, rhs));
        }
      }
    }
  }

  for (const Overlap& t : D.cover.triples()) {
    const int i = t.indices[0], j = t.indices[1], k = t.indices[2];
    const EndValuedForm& Ai = D.A_at(i);
    EndValuedForm ph_ij = D.phi_or_zero(i, j);
    EndValuedForm ph_jk = D.phi_or_zero(j, k);
    EndValuedForm ph_ik = D.phi_or_zero(i, k);
    for (const Vector& x : overlap_samples(t, samples_per_overlap)) {
      GradedLinearMap gij = D.cocycle.transition_at(i, j, x);
      GradedLinearMap gjk = D.cocycle.transition_at(j, k, x);
      GradedLinearMap G = compose(gij, gjk);
      GradedLinearMap a = D.cocycle.a_at(i, j, k, x);
      for (int v = 0; v < n; ++v) {
        Vector ev = axis_vector(n, v);
        GradedLinearMap aterm =
            cm.alpha_tilde_star(a, Ai.eval(x, {ev})) +
            cm.mc_translate(a, D.cocycle.a_derivative_at(i, j, k, v, x));
        GradedLinearMap rhs = ph_jk.eval(x, {ev}) +
                              conj(gjk, ph_ij.eval(x, {ev})) + conj(G, aterm);
        report.dc3 = std::max(
            report.dc3, cm.distance_mod_exact(ph_ik.eval(x, {ev}), rhs));
      }
    }
  }
  return report;
}

CurvatureReport curvatures(const DifferentialCocycle& D, int chart,
                           int samples) {
  const EndValuedForm& A = D.A_at(chart);
  const EndValuedForm& B = D.B_at(chart);
  const GradedLinearMap& d = D.complex.differential();
  CrossedModule cm(D.complex);
  EndValuedForm fake = exterior_d(A) + wedge_plain(A, A) -
                       (compose_left(d, B) + compose_right(B, d));
  EndValuedForm three =
      exterior_d(B) + wedge_plain(A, B) - wedge_plain(B, A);
  GradedLinearMap zero_h =
      GradedLinearMap::zero(D.complex.space(), D.complex.space(), -1);

  CurvatureReport report;
  const int n = D.cover.dim();
  for (const Vector& x : chart_samples(D.cover.chart(chart), samples)) {
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) {
        report.fake = std::max(
            report.fake,
            norm(fake.eval(x, {axis_vector(n, u), axis_vector(n, v)})));
        for (int w = v + 1; w < n; ++w) {
          GradedLinearMap val = three.eval(
              x, {axis_vector(n, u), axis_vector(n, v), axis_vector(n, w)});
          report.threeform =
              std::max(report.threeform, cm.distance_mod_exact(val, zero_h));
        }
      }
  }
  return report;
}

DifferentialCocycle frame_cocycle(
    const std::vector<Superconnection>& local_systems,
    const std::map<std::pair<int, int>, GradedPolyMap>& transitions,
    double flat_tol, double gauge_tol, int samples_per_overlap) {
  if (local_systems.empty())
    throw StructuralError("frame cocycle needs at least one local system");
  const CochainComplex& complex = local_systems[0].complex;
  const GradedVectorSpace& space = complex.space();
  for (const Superconnection& S : local_systems) {
    if (!(S.complex.space() == space) ||
        norm(S.complex.differential() - complex.differential()) > 1e-12)
      throw StructuralError("local systems must share one cochain complex");
  }

  std::vector<Chart> charts;
  charts.reserve(local_systems.size());
  for (const Superconnection& S : local_systems) charts.push_back(S.chart);
  Cover cover(std::move(charts));
  const int n = cover.dim();

  for (std::size_t i = 0; i < local_systems.size(); ++i) {
    const Superconnection& S = local_systems[i];
    FlatnessResiduals flat =
        flatness_residuals(S, chart_samples(S.chart, 2 * samples_per_overlap));
    if (flat.max() > flat_tol) {
      std::ostringstream msg;
      msg << "local system on chart '" << S.chart.id()
          << "' fails flatness: residual " << flat.max();
      throw PreconditionError(msg.str());
    }
  }

  const GradedLinearMap& d = complex.differential();
  for (const Overlap& p : cover.pairs()) {
    int i = p.indices[0], j = p.indices[1];
    // Orient the check along the stored direction: the pair (p, q) below
    // satisfies w_q = g^{-1} w_p g (+ g^{-1} dg in degree 0).
    int a = i, b = j;
    auto it = transitions.find({i, j});
    if (it == transitions.end()) {
      it = transitions.find({j, i});
      std::swap(a, b);
    }
    if (it == transitions.end()) {
      std::ostringstream msg;
      msg << "missing transition for overlap (" << overlap_label(cover, {i, j})
          << ")";
      throw StructuralError(msg.str());
    }
    const GradedPolyMap& gmap = it->second;
    double worst = 0.0;
    const Superconnection& Sp = local_systems[static_cast<std::size_t>(a)];
    const Superconnection& Sq = local_systems[static_cast<std::size_t>(b)];
    for (const Vector& x : overlap_samples(p, samples_per_overlap)) {
      GradedLinearMap g = gmap.eval(x);
      worst = std::max(worst, norm(compose(d, g) - compose(g, d)));
      GradedLinearMap gi = inverse(g);
      for (int v = 0; v < n; ++v) {
        Vector ev = axis_vector(n, v);
        GradedLinearMap expect =
            compose(gi, compose(Sp.omega1.eval(x, {ev}), g)) +
            compose(gi, gmap.derivative(v).eval(x));
        worst = std::max(worst, norm(Sq.omega1.eval(x, {ev}) - expect));
        for (int u = v + 1; u < n; ++u) {
          Vector eu = axis_vector(n, u);
          worst = std::max(
              worst, norm(Sq.omega2.eval(x, {ev, eu}) -
                          compose(gi, compose(Sp.omega2.eval(x, {ev, eu}), g))));
        }
      }
    }
    if (worst > gauge_tol) {
      std::ostringstream msg;
      msg << "transitions violate the gauge relation on overlap ("
          << overlap_label(cover, {i, j}) << "): residual " << worst;
      throw PreconditionError(msg.str());
    }
  }

  GammaCocycle cocycle(space, n);
  for (const auto& [key, gmap] : transitions)
    cocycle.set_transition(key.first, key.second, gmap);

  std::map<int, EndValuedForm> A, B;
  for (std::size_t i = 0; i < local_systems.size(); ++i) {
    A.emplace(static_cast<int>(i), local_systems[i].omega1);
    B.emplace(static_cast<int>(i), local_systems[i].omega2);
  }
  return DifferentialCocycle{std::move(cover), std::move(cocycle), complex,
                             std::move(A), std::move(B), {}};
}

LocalGroupoid::LocalGroupoid(Cover cover, GammaCocycle cocycle,
                             CochainComplex complex)
    : cover_(std::move(cover)),
      cocycle_(std::move(cocycle)),
      cm_(std::move(complex)) {}

void LocalGroupoid::check_membership(int i, int j, const Vector& x) const {
  if (!cover_.chart(i).contains(x) || !cover_.chart(j).contains(x))
    throw StructuralError("groupoid element base point left its overlap");
}

LocalGroupoidObject LocalGroupoid::source(const LocalGroupoidElement& m) const {
  check_membership(m.i, m.j, m.x);
  return {m.j, m.x, m.g};
}

LocalGroupoidObject LocalGroupoid::target(const LocalGroupoidElement& m) const {
  check_membership(m.i, m.j, m.x);
  GradedLinearMap g =
      holab::compose(inverse(cocycle_.transition_at(m.i, m.j, m.x)),
                     holab::compose(cm_.tau(m.h), m.g));
  return {m.i, m.x, std::move(g)};
}

LocalGroupoidElement LocalGroupoid::identity(const LocalGroupoidObject& o) const {
  return {o.i, o.i, o.x,
          GradedLinearMap::zero(cm_.space(), cm_.space(), -1), o.g};
}

LocalGroupoidElement LocalGroupoid::compose(const LocalGroupoidElement& m2,
                                            const LocalGroupoidElement& m1,
                                            double tol) const {
  if (m2.j != m1.i)
    throw StructuralError("middle chart indices do not match");
  if ((m2.x - m1.x).norm() > tol)
    throw StructuralError("base points of composed morphisms differ");
  LocalGroupoidObject t1 = target(m1);
  double mismatch = norm(m2.g - t1.g);
  if (mismatch > tol * std::max(1.0, norm(t1.g))) {
    std::ostringstream msg;
    msg << "source/target mismatch in groupoid composition: residual "
        << mismatch;
    throw PreconditionError(msg.str());
  }
  GradedLinearMap a = cocycle_.a_at(m2.i, m2.j, m1.j, m1.x);
  GradedLinearMap gjk = cocycle_.transition_at(m2.j, m1.j, m1.x);
  GradedLinearMap h =
      cm_.h_mul(cm_.h_mul(a, cm_.alpha(gjk, m2.h)), m1.h);
  return {m2.i, m1.j, m1.x, std::move(h), m1.g};
}

LocalGroupoidObject LocalGroupoid::act(const LocalGroupoidObject& o,
                                       const GradedLinearMap& gp) const {
  return {o.i, o.x, holab::compose(o.g, gp)};
}

LocalGroupoidElement LocalGroupoid::act(const LocalGroupoidElement& m,
                                        const GradedLinearMap& hp,
                                        const GradedLinearMap& gp) const {
  return {m.i, m.j, m.x, cm_.h_mul(m.h, cm_.alpha(m.g, hp)),
          holab::compose(m.g, gp)};
}

ConnectionForms::ConnectionForms(const DifferentialCocycle& D)
    : D_(&D), cm_(D.complex) {}

GradedLinearMap ConnectionForms::object_form(int i, const Vector& x,
                                             const GradedLinearMap& g,
                                             const Vector& v,
                                             const GradedLinearMap& xi) const {
  GradedLinearMap gi = inverse(g);
  return compose(gi, compose(D_->A_at(i).eval(x, {v}), g)) + compose(gi, xi);
}

GradedLinearMap ConnectionForms::morphism_form(
    int i, int j, const Vector& x, const GradedLinearMap& h,
    const GradedLinearMap& g, const Vector& v, const GradedLinearMap& eta,
    const GradedLinearMap& xi) const {
  GradedLinearMap inner =
      cm_.ad_h(cm_.h_inv(h), D_->phi_or_zero(i, j).eval(x, {v})) +
      cm_.alpha_tilde_star(h, D_->A_at(j).eval(x, {v})) +
      cm_.mc_translate(h, eta);
  (void)xi;
  return conj(g, inner);
}

GradedLinearMap ConnectionForms::object_two_form(int i, const Vector& x,
                                                 const GradedLinearMap& g,
                                                 const Vector& u,
                                                 const Vector& v) const {
  return -1.0 * conj(g, D_->B_at(i).eval(x, {u, v}));
}

EquivarianceReport connection_equivariance(const DifferentialCocycle& D, int i,
                                           int j, int samples,
                                           std::uint64_t seed) {
  auto box = D.cover.intersection({i, j});
  if (!box) throw StructuralError("charts do not overlap");
  ConnectionForms forms(D);
  CrossedModule cm(D.complex);
  const GradedVectorSpace& space = D.complex.space();
  const int n = D.cover.dim();
  Rng rng(seed);

  auto random_h = [&](double scale) {
    GradedLinearMap m = GradedLinearMap::zero(space, space, -1);
    for (int k : m.block_degrees()) {
      Matrix b(space.dim(k - 1), space.dim(k));
      for (int r = 0; r < b.rows(); ++r)
        for (int c = 0; c < b.cols(); ++c) b(r, c) = scale * rng.signed_unit();
      m.set_block(k, std::move(b));
    }
    return m;
  };
  auto random_g = [&]() {
    double s = 1.0 + 0.3 * rng.signed_unit();
    return compose(cm.tau(random_h(0.25)), s * GradedLinearMap::identity(space));
  };
  auto random_xi = [&]() {
    return 0.4 * rng.signed_unit() * GradedLinearMap::identity(space) +
           cm.tau_star(random_h(0.5));
  };

  EquivarianceReport report;
  for (const Vector& x : overlap_samples(*box, samples)) {
    GradedLinearMap g = random_g(), gp = random_g();
    GradedLinearMap xi = random_xi(), xip = random_xi();
    GradedLinearMap h = random_h(0.3), hp = random_h(0.3);
    GradedLinearMap eta = random_h(1.0), etap = random_h(1.0);
    GradedLinearMap gg = compose(g, gp);
    GradedLinearMap xig = compose(xi, gp) + compose(g, xip);
    GradedLinearMap gpi = inverse(gp);

    for (int v = 0; v < n; ++v) {
      Vector ev = axis_vector(n, v);
      GradedLinearMap lhs_a = forms.object_form(i, x, gg, ev, xig);
      GradedLinearMap rhs_a =
          compose(gpi, compose(forms.object_form(i, x, g, ev, xi), gp)) +
          compose(gpi, xip);
      report.object_form = std::max(report.object_form, norm(lhs_a - rhs_a));

      // Pushforward of the acted morphism's degree -1 slot, by the product
      // rule through h * (g hp g^{-1}).
      GradedLinearMap gi = inverse(g);
      GradedLinearMap al = cm.alpha(g, hp);
      GradedLinearMap aldot = compose(xi, compose(hp, gi)) +
                              compose(g, compose(etap, gi)) -
                              compose(g, compose(hp, compose(gi, compose(xi, gi))));
      GradedLinearMap H = cm.h_mul(h, al);
      GradedLinearMap Hdot = eta + aldot + compose(eta, cm.tau_star(al)) +
                             compose(h, cm.tau_star(aldot));
      GradedLinearMap lhs_b = forms.morphism_form(i, j, x, H, gg, ev, Hdot, xig);
      GradedLinearMap source_a = forms.object_form(j, x, g, ev, xi);
      GradedLinearMap inner =
          cm.ad_h(cm.h_inv(hp), forms.morphism_form(i, j, x, h, g, ev, eta, xi)) +
          cm.alpha_tilde_star(hp, source_a) + cm.mc_translate(hp, etap);
      GradedLinearMap rhs_b = compose(gpi, compose(inner, gp));
      report.morphism_form =
          std::max(report.morphism_form, cm.distance_mod_exact(lhs_b, rhs_b));

      for (int u = v + 1; u < n; ++u) {
        Vector eu = axis_vector(n, u);
        GradedLinearMap lhs_c = forms.object_two_form(i, x, gg, ev, eu);
        GradedLinearMap rhs_c =
            compose(gpi, compose(forms.object_two_form(i, x, g, ev, eu), gp));
        report.object_two_form = std::max(report.object_two_form,
                                          cm.distance_mod_exact(lhs_c, rhs_c));
      }
    }
  }
  return report;
}

CoverTransportResult transport_cover(
    const DifferentialCocycle& D,
    const std::vector<std::pair<int, PLPath>>& legs, int steps) {
  if (legs.empty()) throw StructuralError("transport needs at least one leg");
  const GradedVectorSpace& space = D.complex.space();
  const int n = D.cover.dim();

  CoverTransportResult result;
  result.value = GradedLinearMap::identity(space);
  result.steps = steps;
  int previous = -1;
  for (std::size_t l = 0; l < legs.size(); ++l) {
    const int idx = legs[l].first;
    const Chart& chart = D.cover.chart(idx);
    const PLPath& path = legs[l].second;
    if (l > 0) {
      Vector from = legs[l - 1].second.eval(1.0);
      Vector to = path.eval(0.0);
      if ((from - to).norm() > 1e-9)
        throw PreconditionError("consecutive legs do not abut");
      if (!D.cover.chart(previous).contains(from) || !chart.contains(from))
        throw DomainError("chart crossing point lies outside an overlap");
      result.value =
          compose(D.cocycle.transition_at(idx, previous, from), result.value);
    }
    Superconnection S{chart, D.complex, D.A_at(idx),
                      EndValuedForm(space, n, 2, -1), std::nullopt};
    TransportResult leg = transport_ode(S, path, steps);
    result.est_error = std::max(result.est_error, leg.est_error);
    result.value = compose(leg.value, result.value);
    previous = idx;
  }
  return result;
}

}  // namespace holab
