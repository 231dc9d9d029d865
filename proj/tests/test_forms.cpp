#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "holab/forms.hpp"

using namespace holab;
using namespace holab::testutil;

TEST_CASE("polynomial matrices multiply like matrices of polynomials") {
  const int n = 2;
  PolyMatrix a(2, 2, n), b(2, 2, n);
  a(0, 0) = pvar(0, n);          // x
  a(0, 1) = pconst(2.0, n);
  a(1, 1) = pvar(1, n, 3.0);     // 3y
  b(0, 0) = pvar(1, n);          // y
  b(1, 0) = pconst(-1.0, n);
  b(1, 1) = pvar(0, n) * pvar(0, n);  // x^2

  PolyMatrix p = a * b;
  double x = 0.7, y = -0.4;
  Matrix ae = a.eval(std::vector<double>{x, y});
  Matrix be = b.eval(std::vector<double>{x, y});
  Matrix pe = p.eval(std::vector<double>{x, y});
  CHECK((pe - ae * be).norm() < 1e-14);

  // entry (0,0) = x y - 2, entry (1,1) = 3 y x^2
  CHECK(p(0, 0).coeff({1, 1}) == doctest::Approx(1.0));
  CHECK(p(0, 0).coeff({0, 0}) == doctest::Approx(-2.0));
  CHECK(p(1, 1).coeff({2, 1}) == doctest::Approx(3.0));

  PolyMatrix d = p.derivative(0);
  CHECK(d(0, 0).coeff({0, 1}) == doctest::Approx(1.0));
  CHECK(d(1, 1).coeff({1, 1}) == doctest::Approx(6.0));

  PolyMatrix wrong(3, 2, n);
  CHECK_THROWS_AS(p += wrong, StructuralError);
  CHECK_THROWS_AS(p * wrong, StructuralError);
  CHECK(PolyMatrix::identity(3, n).eval(std::vector<double>{x, y})
            .isApprox(Matrix::Identity(3, 3)));
}

TEST_CASE("graded polynomial maps evaluate and compose blockwise") {
  CochainComplex cx = two_term_complex();
  const GradedVectorSpace& V = cx.space();
  const int n = 2;

  GradedPolyMap f(V, V, 0, n);
  PolyMatrix fb(2, 2, n);
  fb(0, 1) = pvar(0, n);
  f.set_block(0, fb);
  GradedPolyMap g(V, V, 0, n);
  PolyMatrix gb(2, 2, n);
  gb(1, 0) = pvar(1, n);
  g.set_block(0, gb);

  Vector x(2);
  x << 0.3, 0.8;
  GradedLinearMap fg = compose(f, g).eval(x);
  CHECK((fg.block(0) - f.eval(x).block(0) * g.eval(x).block(0)).norm() < 1e-15);
  CHECK(fg.block(-1).norm() == 0.0);

  CHECK(norm(GradedPolyMap::identity(V, n).eval(x) -
             GradedLinearMap::identity(V)) == 0.0);

  GradedLinearMap c = GradedLinearMap::zero(V, V, 0);
  Matrix m(2, 2);
  m << 1, 2, 3, 4;
  c.set_block(-1, m);
  CHECK(norm(GradedPolyMap::constant(c, n).eval(x) - c) == 0.0);

  Vector bad(3);
  bad << 1, 2, 3;
  CHECK_THROWS_AS(f.eval(bad), StructuralError);

  GradedVectorSpace W(std::map<int, int>{{0, 3}});
  CHECK_THROWS_AS(compose(f, GradedPolyMap::identity(W, n)), StructuralError);
}

TEST_CASE("charts validate their boxes and sample deterministically") {
  CHECK_THROWS_AS(Chart("bad", {0.0, 0.0}, {1.0}), StructuralError);
  CHECK_THROWS_AS(Chart("bad", {0.0, 2.0}, {1.0, 1.0}), StructuralError);

  Chart c("c", {0.0, -1.0}, {2.0, 1.0});
  Vector in(2), out(2);
  in << 1.0, 0.0;
  out << 3.0, 0.0;
  CHECK(c.contains(in));
  CHECK_FALSE(c.contains(out));

  std::vector<Vector> s1 = chart_samples(c, 40);
  std::vector<Vector> s2 = chart_samples(c, 40);
  REQUIRE(s1.size() == 40);
  double drift = 0;
  bool inside = true;
  for (std::size_t i = 0; i < s1.size(); ++i) {
    drift = std::max(drift, (s1[i] - s2[i]).norm());
    inside = inside && c.contains(s1[i]);
  }
  CHECK(drift == 0.0);
  CHECK(inside);

  // distinct chart ids give distinct streams over the same box
  std::vector<Vector> other = chart_samples(Chart("d", {0.0, -1.0}, {2.0, 1.0}), 40);
  double separation = 0;
  for (std::size_t i = 0; i < other.size(); ++i)
    separation = std::max(separation, (s1[i] - other[i]).norm());
  CHECK(separation > 1e-6);
}

TEST_CASE("forms store increasing index tuples and evaluate antisymmetrically") {
  CochainComplex cx = two_term_complex();
  const GradedVectorSpace& V = cx.space();
  const int n = 3;

  EndValuedForm f(V, n, 2, 0);
  CHECK_THROWS_WITH_AS(f.set_component({0}, GradedPolyMap::identity(V, n)),
                       doctest::Contains("length"), StructuralError);
  CHECK_THROWS_WITH_AS(f.set_component({1, 0}, GradedPolyMap::identity(V, n)),
                       doctest::Contains("strictly increasing"), StructuralError);
  CHECK_THROWS_WITH_AS(f.set_component({0, 3}, GradedPolyMap::identity(V, n)),
                       doctest::Contains("range"), StructuralError);

  f.set_component({0, 2}, GradedPolyMap::identity(V, n) * 2.0);
  f.add_to_component({0, 2}, GradedPolyMap::identity(V, n));
  Vector x(3), u(3), v(3);
  x << 0.2, 0.5, 0.9;
  u << 1.0, 0.0, -2.0;
  v << 0.5, 3.0, 1.0;
  GradedLinearMap uv = f.eval(x, {u, v});
  GradedLinearMap vu = f.eval(x, {v, u});
  CHECK(norm(uv + vu) < 1e-14);
  // component is 3 id dx0^dx2: value = 3 (u0 v2 - u2 v0) id
  double det = u(0) * v(2) - u(2) * v(0);
  CHECK(norm(uv - 3.0 * det * GradedLinearMap::identity(V)) < 1e-12);

  CHECK_THROWS_AS(f.eval(x, {u}), StructuralError);
}

TEST_CASE("exterior derivative: pinned value and dd = 0") {
  CochainComplex cx = two_term_complex();
  const GradedVectorSpace& V = cx.space();
  const int n = 2;

  // x dy with identity values
  EndValuedForm xdy(V, n, 1, 0);
  xdy.set_component({1}, scale_map(pvar(0, n), GradedLinearMap::identity(V)));
  EndValuedForm dxdy = exterior_d(xdy);
  Vector x(2), ex(2), ey(2);
  x << 0.37, 0.81;
  ex << 1, 0;
  ey << 0, 1;
  CHECK(norm(dxdy.eval(x, {ex, ey}) - GradedLinearMap::identity(V)) < 1e-14);
  CHECK(exterior_d(dxdy).max_abs_coeff() == 0.0);

  // richer coefficients: dd = 0 holds coefficientwise
  EndValuedForm w(V, n, 1, 0);
  w.set_component({0}, scale_map(pvar(0, n) * pvar(1, n) + pvar(1, n, 0.3),
                                 GradedLinearMap::identity(V)));
  w.set_component({1}, scale_map(pvar(0, n) * pvar(0, n),
                                 GradedLinearMap::identity(V)));
  CHECK(exterior_d(exterior_d(w)).max_abs_coeff() == 0.0);
}

TEST_CASE("wedge evaluation is the antisymmetrized product") {
  CochainComplex cx = two_term_complex();
  const GradedVectorSpace& V = cx.space();
  const int n = 2;

  EndValuedForm a(V, n, 1, 0), b(V, n, 1, 0);
  a.set_component({0}, GradedPolyMap::identity(V, n) * 2.0);
  b.set_component({1}, GradedPolyMap::identity(V, n));
  EndValuedForm ab = wedge_plain(a, b);
  Vector x(2), u(2), v(2);
  x << 0.37, 0.81;
  u << 0.3, -0.2;
  v << 1.1, 0.5;
  GradedLinearMap w1 = ab.eval(x, {u, v});
  GradedLinearMap w2 = compose(a.eval(x, {u}), b.eval(x, {v})) -
                       compose(a.eval(x, {v}), b.eval(x, {u}));
  CHECK(norm(w1 - w2) < 1e-13);

  // odd inner degree on the left flips the composition wedge
  EndValuedForm c(V, n, 1, -1);
  GradedPolyMap cv(V, V, -1, n);
  PolyMatrix blk(2, 2, n);
  blk(0, 0) = pvar(1, n);
  blk(1, 1) = pconst(0.4, n);
  cv.set_block(0, blk);
  c.set_component({0}, cv);
  EndValuedForm plain = wedge_plain(c, b);
  EndValuedForm koszul = wedge_compose(c, b);
  CHECK(norm(koszul.eval(x, {u, v}) + plain.eval(x, {u, v})) < 1e-14);

  // even inner degree: the two wedges agree
  CHECK(norm(wedge_compose(a, b).eval(x, {u, v}) - w1) < 1e-14);
}

TEST_CASE("composing a form with constant maps acts on values") {
  CochainComplex cx = two_term_complex();
  const GradedVectorSpace& V = cx.space();
  const int n = 2;
  EndValuedForm a(V, n, 1, 0);
  a.set_component({0}, scale_map(pvar(1, n), GradedLinearMap::identity(V)));
  GradedLinearMap f = GradedLinearMap::zero(V, V, 0);
  Matrix m(2, 2);
  m << 0.5, 1.0, -0.3, 0.2;
  f.set_block(0, m);
  f.set_block(-1, m.transpose());

  Vector x(2), u(2);
  x << 0.4, 0.9;
  u << 1.0, 2.0;
  CHECK(norm(compose_left(f, a).eval(x, {u}) - compose(f, a.eval(x, {u}))) == 0.0);
  CHECK(norm(compose_right(a, f).eval(x, {u}) - compose(a.eval(x, {u}), f)) == 0.0);
}

namespace {

// The planar gauge fixture: phi0 = 1.3 (id + 0.7 x E) with E the same
// single off-diagonal entry in both degrees, phi1 generic.
GradedPolyMap planar_phi0(const GradedVectorSpace& V) {
  const int n = 2;
  GradedPolyMap phi0 = GradedPolyMap::identity(V, n);
  Polynomial x = Polynomial::variable(n, 0);
  for (int deg : {-1, 0}) {
    PolyMatrix blk = phi0.block(deg);
    blk(0, 0) = Polynomial::constant(n, 1.3);
    blk(1, 1) = Polynomial::constant(n, 1.3);
    blk(0, 1) += 1.3 * 0.7 * x;
    phi0.set_block(deg, blk);
  }
  return phi0;
}

EndValuedForm planar_phi1(const GradedVectorSpace& V) {
  const int n = 2;
  EndValuedForm phi1(V, n, 1, -1);
  GradedPolyMap comp(V, V, -1, n);
  PolyMatrix blk(2, 2, n);
  blk(0, 0) = Polynomial::variable(n, 1);
  blk(1, 0) = Polynomial::constant(n, 0.4);
  blk(1, 1) = 0.9 * Polynomial::variable(n, 0) * Polynomial::variable(n, 1);
  comp.set_block(0, blk);
  phi1.set_component({0}, comp);
  GradedPolyMap comp2(V, V, -1, n);
  PolyMatrix blk2(2, 2, n);
  blk2(0, 1) = Polynomial::constant(n, -0.8);
  blk2(1, 1) = Polynomial::variable(n, 0);
  comp2.set_block(0, blk2);
  phi1.set_component({1}, comp2);
  return phi1;
}

}  // namespace

TEST_CASE("gauge-built connections are flat") {
  CochainComplex cx = two_term_complex();
  const GradedVectorSpace& V = cx.space();
  Chart chart("c0", {0.0, 0.0}, {1.0, 1.0});

  Superconnection S = gauge_flat(chart, cx, planar_phi0(V), planar_phi1(V));
  FlatnessResiduals r = flatness_residuals(S, chart_samples(chart, 50));
  CHECK(r.degree1 < 1e-10);
  CHECK(r.degree2 < 1e-10);
  CHECK(r.degree3 == 0.0);           // two variables carry no 3-forms
  CHECK_FALSE(S.omega3.has_value());
  CHECK_FALSE(S.omega2.is_zero());
}

TEST_CASE("pure frame gauge reproduces the logarithmic derivative") {
  CochainComplex cx = two_term_complex();
  const GradedVectorSpace& V = cx.space();
  const int n = 2;
  Chart chart("c0", {0.0, 0.0}, {1.0, 1.0});
  GradedPolyMap phi0 = planar_phi0(V);
  EndValuedForm zero1(V, n, 1, -1);

  Superconnection S = gauge_flat(chart, cx, phi0, zero1);
  CHECK(S.omega2.is_zero());
  CHECK(flatness_residuals(S, chart_samples(chart, 50)).max() < 1e-10);

  Vector x0(2), ex(2), ey(2);
  x0 << 0.37, 0.81;
  ex << 1, 0;
  ey << 0, 1;
  GradedLinearMap phi0x = phi0.eval(x0);
  for (int axis = 0; axis < 2; ++axis) {
    GradedLinearMap lhs = S.omega1.eval(x0, {axis == 0 ? ex : ey});
    GradedLinearMap rhs =
        compose(inverse(phi0x), phi0.derivative(axis).eval(x0));
    CHECK(norm(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("identity frame with no gauge 1-form gives the bare differential") {
  CochainComplex cx = two_term_complex();
  const GradedVectorSpace& V = cx.space();
  const int n = 2;
  Chart chart("c0", {0.0, 0.0}, {1.0, 1.0});
  Superconnection S = gauge_flat(chart, cx, GradedPolyMap::identity(V, n),
                                 EndValuedForm(V, n, 1, -1));
  CHECK(S.omega1.is_zero());
  CHECK(S.omega2.is_zero());
  CHECK_FALSE(S.omega3.has_value());
}

TEST_CASE("three-variable gauge produces a nonzero flat 3-form") {
  CochainComplex cx = three_term_complex();
  const GradedVectorSpace& V = cx.space();
  const int n = 3;
  Chart chart("box", {0.0, 0.0, 0.0}, {1.0, 1.0, 1.0});

  GradedPolyMap phi0 = GradedPolyMap::identity(V, n);
  {
    // constant part 1.1 id, nilpotent variable part through the E(e1<-e2)
    // ladder in the two matching degrees
    Polynomial x = Polynomial::variable(n, 0), z = Polynomial::variable(n, 2);
    for (int deg : {-1, 0}) {
      PolyMatrix blk = phi0.block(deg);
      blk(0, 0) = Polynomial::constant(n, 1.1);
      blk(1, 1) = Polynomial::constant(n, 1.1);
      blk(0, 1) += 1.1 * (0.6 * x + 0.3 * z);
      phi0.set_block(deg, blk);
    }
    PolyMatrix bot = phi0.block(-2);
    bot(0, 0) = Polynomial::constant(n, 1.1);
    phi0.set_block(-2, bot);
  }
  EndValuedForm phi1(V, n, 1, -1);
  {
    Rng rng(99);
    for (int axis = 0; axis < 3; ++axis) {
      GradedPolyMap comp(V, V, -1, n);
      PolyMatrix b0(2, 2, n), b1(1, 2, n);
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) b0(r, c) = rand_linear(rng, n, 0.5);
      for (int c = 0; c < 2; ++c) b1(0, c) = rand_linear(rng, n, 0.5);
      comp.set_block(0, b0);
      comp.set_block(-1, b1);
      phi1.set_component({axis}, comp);
    }
  }

  Superconnection S = gauge_flat(chart, cx, phi0, phi1);
  REQUIRE(S.omega3.has_value());
  CHECK_FALSE(S.omega3->is_zero());
  FlatnessResiduals r = flatness_residuals(S, chart_samples(chart, 40));
  CHECK(r.degree1 < 1e-9);
  CHECK(r.degree2 < 1e-9);
  CHECK(r.degree3 < 1e-9);
}

TEST_CASE("gauge construction rejects unusable frames") {
  CochainComplex cx = two_term_complex();
  const GradedVectorSpace& V = cx.space();
  const int n = 2;
  Chart chart("c0", {0.0, 0.0}, {1.0, 1.0});
  EndValuedForm zero1(V, n, 1, -1);

  // wrong shapes
  CHECK_THROWS_AS(gauge_flat(chart, cx, GradedPolyMap::identity(V, 3), zero1),
                  StructuralError);
  CHECK_THROWS_AS(gauge_flat(chart, cx, GradedPolyMap::identity(V, n),
                             EndValuedForm(V, n, 2, -1)),
                  StructuralError);

  // variable part proportional to the identity is not nilpotent
  GradedPolyMap grow = GradedPolyMap::identity(V, n);
  for (int deg : {-1, 0}) {
    PolyMatrix blk = grow.block(deg);
    blk(0, 0) += pvar(0, n, 1.5);
    blk(1, 1) += pvar(0, n, 1.5);
    grow.set_block(deg, blk);
  }
  CHECK_THROWS_WITH_AS(gauge_flat(chart, cx, grow, zero1),
                       doctest::Contains("no polynomial inverse"), DomainError);

  // chain-map failure: variable part through a block that does not commute
  // with the differential
  GradedPolyMap skew = GradedPolyMap::identity(V, n);
  for (int deg : {-1, 0}) {
    PolyMatrix blk = skew.block(deg);
    blk(1, 0) += pvar(0, n, 0.5);
    skew.set_block(deg, blk);
  }
  CHECK_THROWS_WITH_AS(gauge_flat(chart, cx, skew, zero1),
                       doctest::Contains("chain-map"), PreconditionError);

  // frame that degenerates inside the box
  GradedPolyMap vanish(V, V, 0, n);
  for (int deg : {-1, 0}) {
    PolyMatrix blk(2, 2, n);
    blk(0, 0) = pvar(0, n);
    blk(1, 1) = pconst(1.0, n);
    vanish.set_block(deg, blk);
  }
  CHECK_THROWS_AS(gauge_flat(chart, cx, vanish, zero1), DomainError);
}
