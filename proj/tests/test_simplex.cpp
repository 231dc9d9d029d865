#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "holab/simplex.hpp"

using namespace holab;
using namespace holab::testutil;

namespace {

Simplex2 curved_sigma() {
  // sigma(t1,t2) = (t1 + 0.3 t1 t2, t2 - 0.2 t1^2 + 0.1 t2^2)
  Polynomial x(2), y(2);
  x.add_term({1, 0}, 1.0);
  x.add_term({1, 1}, 0.3);
  y.add_term({0, 1}, 1.0);
  y.add_term({2, 0}, -0.2);
  y.add_term({0, 2}, 0.1);
  return Simplex2({x, y});
}

}  // namespace

TEST_CASE("paths join, evaluate and reverse") {
  PathSegment s1{{mono(1, {1}, 1.0), pconst(0.0, 1)}};          // (t, 0)
  PathSegment s2{{pconst(1.0, 1), mono(1, {1}, 2.0)}};          // (1, 2t)
  PLPath p({s1, s2});
  CHECK(p.dim() == 2);
  CHECK(p.segment_count() == 2);
  CHECK((p.start() - Eigen::Vector2d(0, 0).eval()).norm() == 0.0);
  CHECK((p.end() - Eigen::Vector2d(1, 2).eval()).norm() == 0.0);
  CHECK((p.eval(0.25) - Eigen::Vector2d(0.5, 0).eval()).norm() < 1e-15);
  CHECK((p.eval(0.75) - Eigen::Vector2d(1.0, 1.0).eval()).norm() < 1e-15);

  PLPath r = p.reversed();
  double worst = 0;
  for (double t = 0; t <= 1.0001; t += 0.1)
    worst = std::max(worst, (r.eval(t) - p.eval(1 - t)).norm());
  CHECK(worst < 1e-14);

  // segments that do not abut are rejected
  PathSegment jump{{pconst(5.0, 1), pconst(5.0, 1)}};
  CHECK_THROWS_AS(PLPath({s1, jump}), PreconditionError);
  CHECK_THROWS_AS(PLPath(std::vector<PathSegment>{}), StructuralError);
  PathSegment bad_dim{{mono(1, {1}, 1.0)}};
  CHECK_THROWS_AS(PLPath({s1, bad_dim}), StructuralError);
  CHECK_THROWS_AS(concatenate(PLPath({s1}), PLPath({jump})), PreconditionError);
  CHECK(concatenate(PLPath({s1}), PLPath({s2})).segment_count() == 2);
}

TEST_CASE("folding map hits the pinned corner values") {
  CHECK(theta2(1.0, 0.7).norm() < 1e-15);
  CHECK((theta2(0.5, 0.3) - Eigen::Vector2d(0.3, 0.0)).norm() < 1e-15);
  CHECK((theta2(0.25, 0.5) - Eigen::Vector2d(0.5, 0.5)).norm() < 1e-15);
  CHECK((theta2(0.0, 0.9) - Eigen::Vector2d(1.0, 1.0)).norm() < 1e-15);
  // image stays inside the triangle 1 >= t1 >= t2 >= 0
  for (double t = 0; t <= 1.0001; t += 0.05)
    for (double s = 0; s <= 1.0001; s += 0.05) {
      Eigen::Vector2d q = theta2(t, s);
      CHECK(q(0) <= 1.0 + 1e-12);
      CHECK(q(1) <= q(0) + 1e-12);
      CHECK(q(1) >= -1e-12);
    }
}

TEST_CASE("simplex faces, vertices and jacobian") {
  Simplex2 sigma = curved_sigma();
  auto vs = vertices(sigma);
  CHECK((vs[0] - sigma.eval(0, 0)).norm() == 0.0);
  CHECK((vs[1] - sigma.eval(1, 0)).norm() == 0.0);
  CHECK((vs[2] - sigma.eval(1, 1)).norm() == 0.0);

  PLPath d0 = face(sigma, 0), d1 = face(sigma, 1), d2 = face(sigma, 2);
  double w = 0;
  for (double u = 0; u <= 1.0001; u += 0.1) {
    w = std::max(w, (d0.eval(u) - sigma.eval(1.0, u)).norm());
    w = std::max(w, (d1.eval(u) - sigma.eval(u, u)).norm());
    w = std::max(w, (d2.eval(u) - sigma.eval(u, 0.0)).norm());
  }
  CHECK(w < 1e-14);
  CHECK_THROWS_AS(face(sigma, 3), StructuralError);

  // composite edge = [v0,v1] then [v1,v2]
  PLPath comp = composite_edge(sigma);
  CHECK((comp.start() - vs[0]).norm() < 1e-14);
  CHECK((comp.eval(0.5) - vs[1]).norm() < 1e-14);
  CHECK((comp.end() - vs[2]).norm() < 1e-14);
  CHECK((front_edge(sigma).eval(0.3) - d2.eval(0.3)).norm() < 1e-14);
  CHECK((back_edge(sigma).eval(0.3) - d0.eval(0.3)).norm() < 1e-14);

  // jacobian columns against a central difference
  const double eps = 1e-6;
  Matrix J = sigma.jacobian(0.6, 0.3);
  Vector c1 = (sigma.eval(0.6 + eps, 0.3) - sigma.eval(0.6 - eps, 0.3)) / (2 * eps);
  Vector c2 = (sigma.eval(0.6, 0.3 + eps) - sigma.eval(0.6, 0.3 - eps)) / (2 * eps);
  CHECK((J.col(0) - c1).norm() < 1e-9);
  CHECK((J.col(1) - c2).norm() < 1e-9);

  CHECK_THROWS_AS(Simplex2(std::vector<Polynomial>{}), StructuralError);
  CHECK_THROWS_AS(Simplex2({mono(3, {1, 0, 0}, 1.0)}), StructuralError);
}

TEST_CASE("raw bigon is the simplex composed with the folding map") {
  Simplex2 sigma = curved_sigma();
  Bigon raw = bigon_from_simplex(sigma);
  double worst = 0;
  for (double s = 0; s <= 1.0001; s += 0.125)
    for (double t = 0; t <= 1.0001; t += 0.0625) {
      auto th = theta2(t, s);
      worst = std::max(worst, (raw.eval(s, t) - sigma.eval(th(0), th(1))).norm());
    }
  CHECK(worst < 1e-13);
  auto vs = vertices(sigma);
  CHECK((raw.eval(0.37, 0.0) - vs[2]).norm() < 1e-13);
  CHECK((raw.eval(0.37, 1.0) - vs[0]).norm() < 1e-13);
}

TEST_CASE("oriented bigon reverses both parameters") {
  Simplex2 sigma = curved_sigma();
  Bigon raw = bigon_from_simplex(sigma);
  Bigon orb = oriented_bigon(sigma);
  double worst = 0;
  for (double s = 0; s <= 1.0001; s += 0.125)
    for (double t = 0; t <= 1.0001; t += 0.0625)
      worst = std::max(worst, (orb.eval(s, t) - raw.eval(1 - s, 1 - t)).norm());
  CHECK(worst < 1e-13);

  auto vs = vertices(sigma);
  CHECK((orb.eval(0.61, 0.0) - vs[0]).norm() < 1e-13);
  CHECK((orb.eval(0.61, 1.0) - vs[2]).norm() < 1e-13);

  // s = 0 fiber runs along the composite edge
  PLPath comp = composite_edge(sigma);
  PLPath f0 = orb.fiber(0.0);
  double w0 = 0;
  for (double t = 0; t <= 1.0001; t += 0.03125)
    w0 = std::max(w0, (f0.eval(t) - comp.eval(t)).norm());
  CHECK(w0 < 1e-13);

  // s = 1 fiber sits at v0 for the first half, then runs the long edge
  PLPath lng = face(sigma, 1);
  PLPath f1 = orb.fiber(1.0);
  double w1 = 0;
  for (double t = 0; t <= 1.0001; t += 0.03125)
    w1 = std::max(w1, (f1.eval(t) - lng.eval(std::max(0.0, 2 * t - 1))).norm());
  CHECK(w1 < 1e-13);
}

TEST_CASE("bigon fibers match the piece maps between seams") {
  Simplex2 sigma = curved_sigma();
  Bigon orb = oriented_bigon(sigma);
  double worst = 0;
  for (double s : {0.2, 0.5, 0.85}) {
    PLPath f = orb.fiber(s);
    int nseg = f.segment_count();
    std::vector<double> brks{0.0};
    for (double b : orb.seams(s)) brks.push_back(b);
    brks.push_back(1.0);
    REQUIRE(static_cast<int>(brks.size()) == nseg + 1);
    for (int i = 0; i < nseg; ++i)
      for (double u : {0.0, 0.5, 1.0}) {
        double t = brks[i] + (brks[i + 1] - brks[i]) * u;
        worst = std::max(worst, (f.segment(i).eval(u) - orb.eval(s, t)).norm());
      }
  }
  CHECK(worst < 1e-13);
}

TEST_CASE("degenerate constant simplex still folds into a valid bigon") {
  std::vector<Polynomial> c{Polynomial::constant(2, 0.4),
                            Polynomial::constant(2, -1.1)};
  Simplex2 deg(c);
  Bigon orb = oriented_bigon(deg);
  PLPath f = orb.fiber(0.5);
  CHECK((f.eval(0.3) - f.eval(0.9)).norm() < 1e-15);
}

TEST_CASE("bigons validate their piece layout") {
  std::vector<Polynomial> line{mono(2, {0, 1}, 1.0), pconst(0.0, 2)};
  BigonPiece whole{0.0, 0.0, 1.0, 0.0, line};
  CHECK_NOTHROW(Bigon({whole}));
  CHECK_THROWS_AS(Bigon(std::vector<BigonPiece>{}), StructuralError);

  BigonPiece first{0.0, 0.0, 0.5, 0.0, line};
  BigonPiece gaps{0.7, 0.0, 1.0, 0.0, line};
  CHECK_THROWS_WITH_AS(Bigon({first, gaps}), doctest::Contains("abut"),
                       StructuralError);

  // ends that move with s are not a homotopy with fixed endpoints
  std::vector<Polynomial> drift{mono(2, {1, 0}, 1.0) + mono(2, {0, 1}, 1.0),
                                pconst(0.0, 2)};
  BigonPiece moving{0.0, 0.0, 1.0, 0.0, drift};
  CHECK_THROWS_AS(Bigon({moving}), PreconditionError);
}
