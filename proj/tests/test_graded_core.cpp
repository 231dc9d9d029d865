#include <cstdlib>
#include <random>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "holab/graded.hpp"

using namespace holab;
using namespace holab::testutil;

TEST_CASE("graded space stores positive dimensions only") {
  GradedVectorSpace V(std::map<int, int>{{-2, 1}, {0, 3}, {2, 0}});
  CHECK(V.dim(-2) == 1);
  CHECK(V.dim(0) == 3);
  CHECK(V.dim(2) == 0);
  CHECK(V.dim(7) == 0);
  CHECK(V.total_dim() == 4);
  CHECK(V.degrees() == std::vector<int>{-2, 0});
}

TEST_CASE("graded map blocks, shapes and arithmetic") {
  GradedVectorSpace V(std::map<int, int>{{-1, 2}, {0, 3}});
  GradedLinearMap f = GradedLinearMap::zero(V, V, 0);
  CHECK(f.block_degrees() == std::vector<int>{-1, 0});
  CHECK(f.block(-1).rows() == 2);
  CHECK(f.block(0).cols() == 3);
  CHECK(norm(f) == 0.0);

  // degree 1 map only has the block out of degree -1
  GradedLinearMap g = GradedLinearMap::zero(V, V, 1);
  CHECK(g.block_degrees() == std::vector<int>{-1});
  CHECK(g.block(-1).rows() == 3);
  CHECK_THROWS_AS(g.set_block(-1, Matrix::Zero(2, 2)), StructuralError);
  CHECK_THROWS_AS(f.set_block(5, Matrix::Zero(1, 1)), StructuralError);

  Matrix a(2, 2), b(2, 2);
  a << 1, 2, 3, 4;
  b << 0, 1, -1, 0;
  GradedLinearMap fa = GradedLinearMap::zero(V, V, 0);
  fa.set_block(-1, a);
  GradedLinearMap fb = GradedLinearMap::zero(V, V, 0);
  fb.set_block(-1, b);
  CHECK(((fa + fb).block(-1) - (a + b)).norm() == 0.0);
  CHECK(((fa - fb).block(-1) - (a - b)).norm() == 0.0);
  CHECK(((2.0 * fa).block(-1) - 2.0 * a).norm() == 0.0);
  CHECK(norm(fa) == doctest::Approx(a.norm()));

  GradedVectorSpace W(std::map<int, int>{{0, 1}});
  GradedLinearMap h = GradedLinearMap::zero(W, W, 0);
  CHECK_THROWS_WITH_AS(fa += h, "graded map addition requires matching spaces and degree",
                       StructuralError);
}

TEST_CASE("composition adds degrees and multiplies blocks") {
  GradedVectorSpace V(std::map<int, int>{{-1, 2}, {0, 2}, {1, 2}});
  Matrix a(2, 2), b(2, 2);
  a << 2, 1, 0, 1;
  b << 1, -1, 2, 0;
  GradedLinearMap f = GradedLinearMap::zero(V, V, 1);  // applied second
  f.set_block(0, a);
  GradedLinearMap g = GradedLinearMap::zero(V, V, 1);  // applied first
  g.set_block(-1, b);
  GradedLinearMap fg = compose(f, g);
  CHECK(fg.degree() == 2);
  CHECK((fg.block(-1) - a * b).norm() == 0.0);

  GradedVectorSpace W(std::map<int, int>{{0, 3}});
  GradedLinearMap h = GradedLinearMap::zero(W, W, 0);
  CHECK_THROWS_AS(compose(f, h), StructuralError);
}

TEST_CASE("blockwise inverse and conditioning") {
  GradedVectorSpace V(std::map<int, int>{{-1, 2}, {0, 2}});
  Matrix a(2, 2), b(2, 2);
  a << 2, 1, 1, 1;
  b << 0, -1, 1, 0;
  GradedLinearMap f = GradedLinearMap::zero(V, V, 0);
  f.set_block(-1, a);
  f.set_block(0, b);
  GradedLinearMap fi = inverse(f);
  CHECK(norm(compose(fi, f) - GradedLinearMap::identity(V)) < 1e-14);
  CHECK(norm(compose(f, fi) - GradedLinearMap::identity(V)) < 1e-14);
  CHECK(max_condition_number(GradedLinearMap::identity(V)) == doctest::Approx(1.0));

  Matrix s(2, 2);
  s << 1, 2, 2, 4;  // rank 1
  GradedLinearMap sing = GradedLinearMap::zero(V, V, 0);
  sing.set_block(-1, s);
  sing.set_block(0, b);
  CHECK_THROWS_WITH_AS(inverse(sing), doctest::Contains("degree -1"), DomainError);

  GradedLinearMap off = GradedLinearMap::zero(V, V, 1);
  CHECK_THROWS_AS(inverse(off), DomainError);
}

TEST_CASE("cochain complex validates its differential") {
  GradedVectorSpace V(std::map<int, int>{{-2, 2}, {-1, 2}, {0, 2}});
  GradedLinearMap d = GradedLinearMap::zero(V, V, 1);
  Matrix D = Matrix::Zero(2, 2);
  D(0, 1) = 1.0;
  d.set_block(-1, D);
  d.set_block(-2, D);  // D*D = 0, fine
  CHECK_NOTHROW(CochainComplex(V, d));

  GradedLinearMap bad = d;
  bad.set_block(-2, Matrix::Identity(2, 2));  // d(-1) о d(-2) = D != 0
  CHECK_THROWS_WITH_AS(CochainComplex(V, bad),
                       "differential does not square to zero", StructuralError);
  CHECK_NOTHROW(CochainComplex::unchecked(V, bad));

  GradedLinearMap wrongdeg = GradedLinearMap::zero(V, V, 0);
  CHECK_THROWS_AS(CochainComplex(V, wrongdeg), StructuralError);
}

TEST_CASE("graded commutator signs") {
  CochainComplex cx = testutil::two_term_complex();
  const GradedVectorSpace& V = cx.space();
  const GradedLinearMap& d = cx.differential();

  GradedLinearMap X0 = GradedLinearMap::zero(V, V, 0);
  Matrix m(2, 2);
  m << 0.3, -0.2, 0.7, 0.1;
  X0.set_block(-1, m);
  X0.set_block(0, m.transpose());
  CHECK(norm(graded_commutator_with_differential(cx, X0) -
             (compose(d, X0) - compose(X0, d))) == 0.0);

  GradedLinearMap X1 = GradedLinearMap::zero(V, V, -1);
  X1.set_block(0, m);
  CHECK(norm(graded_commutator_with_differential(cx, X1) -
             (compose(d, X1) + compose(X1, d))) == 0.0);
}

TEST_CASE("exactness solve on a complex without degree -2") {
  // No degree -2 piece, so the only exact degree -1 map is zero and the
  // residual equals the norm of the input.
  CochainComplex cx = testutil::two_term_complex();
  GradedLinearMap X = GradedLinearMap::zero(cx.space(), cx.space(), -1);
  Matrix m(2, 2);
  m << 0.5, 0, 0, -0.25;
  X.set_block(0, m);
  ExactnessResult r = cx.solve_exactness(X);
  CHECK_FALSE(r.is_exact);
  CHECK(r.residual == doctest::Approx(m.norm()).epsilon(1e-12));
  CHECK(norm(r.witness) < 1e-12);

  ExactnessResult z = cx.solve_exactness(X - X);
  CHECK(z.is_exact);
  CHECK(z.residual < 1e-14);
}

TEST_CASE("exactness solve finds witnesses and orthogonal distances") {
  CochainComplex cx = testutil::three_term_complex();
  const GradedVectorSpace& V = cx.space();
  const GradedLinearMap& d = cx.differential();

  // dk - kd for random degree -2 maps k is exact by definition.
  Rng rng(42);
  for (int rep = 0; rep < 5; ++rep) {
    GradedLinearMap k = GradedLinearMap::zero(V, V, -2);
    Matrix kb(1, 2);
    kb << rng.signed_unit(), rng.signed_unit();
    k.set_block(0, kb);
    GradedLinearMap X = compose(d, k) - compose(k, d);
    ExactnessResult r = cx.solve_exactness(X);
    CHECK(r.is_exact);
    CHECK(r.residual < 1e-12);
    CHECK(norm((compose(d, r.witness) - compose(r.witness, d)) - X) < 1e-12);
  }

  // For this complex dk - kd has zero block out of degree 0 and image
  // span{(0,1)} out of degree -1, so the distance of a general X to the
  // exact subspace is computable by hand.
  GradedLinearMap X = GradedLinearMap::zero(V, V, -1);
  Matrix x0(2, 2);
  x0 << 0.3, -0.1, 0.2, 0.4;
  Matrix x1(1, 2);
  x1 << 0.7, -0.6;
  X.set_block(0, x0);
  X.set_block(-1, x1);
  ExactnessResult r = cx.solve_exactness(X);
  double expected = std::sqrt(x0.squaredNorm() + 0.7 * 0.7);
  CHECK(r.residual == doctest::Approx(expected).epsilon(1e-10));

  GradedLinearMap wrong = GradedLinearMap::zero(V, V, 0);
  CHECK_THROWS_AS(cx.solve_exactness(wrong), StructuralError);
}

TEST_CASE("rng matches the reference mt19937_64 stream and is in range") {
  Rng rng(5489);
  std::mt19937_64 ref(5489);
  for (int i = 0; i < 200; ++i) CHECK(rng.next_u64() == ref());

  Rng a(7), b(7), c(8);
  bool identical = true, differs = false;
  for (int i = 0; i < 64; ++i) {
    std::uint64_t va = a.next_u64();
    identical = identical && (va == b.next_u64());
    differs = differs || (va != c.next_u64());
  }
  CHECK(identical);
  CHECK(differs);

  Rng r(99);
  std::set<int> seen;
  for (int i = 0; i < 400; ++i) {
    double u = r.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    double s = r.signed_unit();
    CHECK(s >= -1.0);
    CHECK(s < 1.0);
    double v = r.uniform(2.0, 3.0);
    CHECK(v >= 2.0);
    CHECK(v < 3.0);
    int k = r.uniform_int(-1, 2);
    CHECK(k >= -1);
    CHECK(k <= 2);
    seen.insert(k);
    CHECK(std::isfinite(r.normal()));
  }
  CHECK(seen.size() == 4);  // inclusive bounds are reachable
}

TEST_CASE("halton radical inverse pins") {
  CHECK(halton(0, 2) == 0.0);
  CHECK(halton(1, 2) == 0.5);
  CHECK(halton(2, 2) == 0.25);
  CHECK(halton(3, 2) == 0.75);
  CHECK(halton(4, 2) == 0.125);
  CHECK(halton(1, 3) == doctest::Approx(1.0 / 3));
  CHECK(halton(5, 3) == doctest::Approx(7.0 / 9));  // digits of 5 base 3, reflected
  for (std::uint64_t i = 1; i < 60; ++i) {
    CHECK(halton(i, 5) > 0.0);
    CHECK(halton(i, 5) < 1.0);
  }
}

TEST_CASE("parallel_for covers every index under any thread cap") {
  for (const char* cap : {"1", "3", "256"}) {
    setenv("HOLAB_THREADS", cap, 1);
    std::vector<int> hits(301, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    bool all_once = true;
    for (int h : hits) all_once = all_once && (h == 1);
    CHECK(all_once);
    CHECK(parallelism_cap() >= 1);
  }
  setenv("HOLAB_THREADS", "not-a-number", 1);
  CHECK(parallelism_cap() == 1);
  unsetenv("HOLAB_THREADS");
  CHECK(parallelism_cap() == 1);  // default is single-threaded
}
