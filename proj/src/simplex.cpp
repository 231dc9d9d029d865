#include "holab/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace holab {

namespace {

Vector eval_coords(const std::vector<Polynomial>& coords,
                   std::span<const double> x) {
  Vector out(static_cast<int>(coords.size()));
  for (std::size_t i = 0; i < coords.size(); ++i) out(static_cast<int>(i)) = coords[i](x);
  return out;
}

std::vector<Polynomial> compose_coords(const std::vector<Polynomial>& coords,
                                       const std::vector<Polynomial>& images) {
  std::vector<Polynomial> out;
  out.reserve(coords.size());
  for (const Polynomial& c : coords) out.push_back(c.compose(images));
  return out;
}

}  // namespace

Vector PathSegment::eval(double u) const {
  const double xs[1] = {u};
  return eval_coords(coords, xs);
}

Vector PathSegment::velocity(double u) const {
  const double xs[1] = {u};
  Vector out(dim());
  for (int i = 0; i < dim(); ++i) out(i) = coords[i].derivative(0)(xs);
  return out;
}

PLPath::PLPath(std::vector<PathSegment> segments, double tol)
    : segments_(std::move(segments)) {
  if (segments_.empty()) throw StructuralError("PLPath: no segments");
  const int n = segments_.front().dim();
  if (n == 0) throw StructuralError("PLPath: zero-dimensional segment");
  for (const PathSegment& seg : segments_) {
    if (seg.dim() != n) throw StructuralError("PLPath: segment dimension mismatch");
    for (const Polynomial& p : seg.coords)
      if (p.nvars() != 1)
        throw StructuralError("PLPath: segment coordinates must be univariate");
  }
  for (std::size_t i = 0; i + 1 < segments_.size(); ++i) {
    const double gap = (segments_[i].eval(1.0) - segments_[i + 1].eval(0.0)).norm();
    if (gap > tol) {
      std::ostringstream os;
      os << "PLPath: junction gap " << gap << " after segment " << i;
      throw PreconditionError(os.str());
    }
  }
}

int PLPath::dim() const {
  return segments_.empty() ? 0 : segments_.front().dim();
}

Vector PLPath::start() const { return segments_.front().eval(0.0); }

Vector PLPath::end() const { return segments_.back().eval(1.0); }

Vector PLPath::eval(double t) const {
  const int n = segment_count();
  const double scaled = t * n;
  int i = static_cast<int>(std::floor(scaled));
  i = std::clamp(i, 0, n - 1);
  return segments_[i].eval(scaled - i);
}

PLPath PLPath::reversed() const {
  // u -> 1 - u within each segment, segments in reverse order.
  std::vector<Polynomial> flip{Polynomial::constant(1, 1.0)};
  flip[0] -= Polynomial::variable(1, 0);
  std::vector<PathSegment> out;
  out.reserve(segments_.size());
  for (auto it = segments_.rbegin(); it != segments_.rend(); ++it)
    out.push_back(PathSegment{compose_coords(it->coords, flip)});
  return PLPath(std::move(out));
}

PLPath concatenate(const PLPath& first, const PLPath& second, double tol) {
  if (first.dim() != second.dim())
    throw StructuralError("concatenate: path dimension mismatch");
  std::vector<PathSegment> segs;
  segs.reserve(static_cast<std::size_t>(first.segment_count()) +
               second.segment_count());
  for (int i = 0; i < first.segment_count(); ++i) segs.push_back(first.segment(i));
  for (int i = 0; i < second.segment_count(); ++i) segs.push_back(second.segment(i));
  return PLPath(std::move(segs), tol);
}

Simplex2::Simplex2(std::vector<Polynomial> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw StructuralError("Simplex2: no coordinates");
  for (const Polynomial& p : coords_)
    if (p.nvars() != 2)
      throw StructuralError("Simplex2: coordinates must be polynomials in (t1, t2)");
}

Vector Simplex2::eval(double t1, double t2) const {
  const double xs[2] = {t1, t2};
  return eval_coords(coords_, xs);
}

Matrix Simplex2::jacobian(double t1, double t2) const {
  const double xs[2] = {t1, t2};
  Matrix out(dim(), 2);
  for (int i = 0; i < dim(); ++i) {
    out(i, 0) = coords_[i].derivative(0)(xs);
    out(i, 1) = coords_[i].derivative(1)(xs);
  }
  return out;
}

Eigen::Vector2d theta2(double t, double s) {
  double a, b;
  if (t <= 0.5) {
    a = s;
    b = 1.0 - 2.0 * t;
  } else {
    a = 2.0 * (1.0 - t) * s;
    b = 0.0;
  }
  return Eigen::Vector2d(std::max(a, b), b);
}

PLPath face(const Simplex2& sigma, int i) {
  const Polynomial u = Polynomial::variable(1, 0);
  const Polynomial one = Polynomial::constant(1, 1.0);
  const Polynomial zero = Polynomial(1);
  std::vector<Polynomial> images;
  switch (i) {
    case 0: images = {one, u}; break;
    case 1: images = {u, u}; break;
    case 2: images = {u, zero}; break;
    default: throw StructuralError("face: index must be 0, 1 or 2");
  }
  return PLPath({PathSegment{compose_coords(sigma.coords(), images)}});
}

std::array<Vector, 3> vertices(const Simplex2& sigma) {
  return {sigma.eval(0.0, 0.0), sigma.eval(1.0, 0.0), sigma.eval(1.0, 1.0)};
}

PLPath front_edge(const Simplex2& sigma) { return face(sigma, 2); }

PLPath back_edge(const Simplex2& sigma) { return face(sigma, 0); }

PLPath composite_edge(const Simplex2& sigma) {
  return concatenate(face(sigma, 2), face(sigma, 0));
}

Bigon::Bigon(std::vector<BigonPiece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw StructuralError("Bigon: no pieces");
  const int n = static_cast<int>(pieces_.front().map.size());
  if (n == 0) throw StructuralError("Bigon: zero-dimensional map");
  for (const BigonPiece& p : pieces_) {
    if (static_cast<int>(p.map.size()) != n)
      throw StructuralError("Bigon: piece dimension mismatch");
    for (const Polynomial& c : p.map)
      if (c.nvars() != 2)
        throw StructuralError("Bigon: piece maps must be polynomials in (s, t)");
  }
  if (pieces_.front().lo0 != 0.0 || pieces_.front().lo1 != 0.0 ||
      pieces_.back().hi0 != 1.0 || pieces_.back().hi1 != 0.0)
    throw StructuralError("Bigon: pieces must cover t in [0, 1]");
  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i)
    if (pieces_[i].hi0 != pieces_[i + 1].lo0 || pieces_[i].hi1 != pieces_[i + 1].lo1)
      throw StructuralError("Bigon: piece ranges must abut");

  const double sample_s[5] = {0.0, 0.27, 0.5, 0.81, 1.0};
  const Vector end0 = eval(0.0, 0.0);
  const Vector end1 = eval(0.0, 1.0);
  for (double s : sample_s) {
    for (const BigonPiece& p : pieces_)
      if (p.lo(s) > p.hi(s) + 1e-12)
        throw StructuralError("Bigon: piece range inverted");
    if ((eval(s, 0.0) - end0).norm() > 1e-12 ||
        (eval(s, 1.0) - end1).norm() > 1e-12)
      throw PreconditionError("Bigon: ends move with s");
    for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
      const double seam = pieces_[i].hi(s);
      const double xs[2] = {s, seam};
      const Vector a = eval_coords(pieces_[i].map, xs);
      const Vector b = eval_coords(pieces_[i + 1].map, xs);
      if ((a - b).norm() > 1e-12)
        throw PreconditionError("Bigon: pieces disagree at a seam");
    }
  }
}

int Bigon::dim() const {
  return pieces_.empty() ? 0 : static_cast<int>(pieces_.front().map.size());
}

int Bigon::piece_index(double s, double t) const {
  for (std::size_t i = 0; i < pieces_.size(); ++i)
    if (t <= pieces_[i].hi(s) + 1e-14) return static_cast<int>(i);
  return piece_count() - 1;
}

Vector Bigon::eval(double s, double t) const {
  const BigonPiece& p = pieces_[piece_index(s, t)];
  const double xs[2] = {s, t};
  return eval_coords(p.map, xs);
}

Vector Bigon::dt(double s, double t) const {
  const BigonPiece& p = pieces_[piece_index(s, t)];
  const double xs[2] = {s, t};
  Vector out(dim());
  for (int i = 0; i < dim(); ++i) out(i) = p.map[i].derivative(1)(xs);
  return out;
}

Vector Bigon::ds(double s, double t) const {
  const BigonPiece& p = pieces_[piece_index(s, t)];
  const double xs[2] = {s, t};
  Vector out(dim());
  for (int i = 0; i < dim(); ++i) out(i) = p.map[i].derivative(0)(xs);
  return out;
}

std::vector<double> Bigon::seams(double s) const {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
    const double seam = pieces_[i].hi(s);
    if (seam > 1e-14 && seam < 1.0 - 1e-14) out.push_back(seam);
  }
  return out;
}

PLPath Bigon::fiber(double s) const {
  std::vector<PathSegment> segs;
  const Polynomial u = Polynomial::variable(1, 0);
  for (const BigonPiece& p : pieces_) {
    const double lo = p.lo(s), hi = p.hi(s);
    if (hi - lo <= 1e-14) continue;
    // Substitute the fixed s and rescale [lo, hi] onto [0, 1].
    std::vector<Polynomial> images{Polynomial::constant(1, s),
                                   Polynomial::constant(1, lo) + (hi - lo) * u};
    segs.push_back(PathSegment{compose_coords(p.map, images)});
  }
  if (segs.empty()) {
    // Entirely degenerate fiber: constant path at the shared endpoint.
    std::vector<Polynomial> images{Polynomial::constant(1, s),
                                   Polynomial(1)};
    segs.push_back(PathSegment{compose_coords(pieces_.front().map, images)});
  }
  return PLPath(std::move(segs));
}

namespace {

// Affine images (in the variables s, t) used to compose a simplex with the
// linear pieces of the folding map.
std::vector<Polynomial> st_images(double c, double cs, double ct, double cst,
                                  double d, double ds_, double dt_, double dst) {
  const int n = 2;
  Polynomial first = Polynomial::constant(n, c);
  first.add_term({1, 0}, cs);
  first.add_term({0, 1}, ct);
  first.add_term({1, 1}, cst);
  Polynomial second = Polynomial::constant(n, d);
  second.add_term({1, 0}, ds_);
  second.add_term({0, 1}, dt_);
  second.add_term({1, 1}, dst);
  return {first, second};
}

}  // namespace

Bigon bigon_from_simplex(const Simplex2& sigma) {
  std::vector<BigonPiece> pieces(3);
  // t in [0, (1-s)/2]: sigma(1-2t, 1-2t).
  pieces[0].lo0 = 0.0;
  pieces[0].lo1 = 0.0;
  pieces[0].hi0 = 0.5;
  pieces[0].hi1 = -0.5;
  pieces[0].map =
      compose_coords(sigma.coords(), st_images(1, 0, -2, 0, 1, 0, -2, 0));
  // t in [(1-s)/2, 1/2]: sigma(s, 1-2t).
  pieces[1].lo0 = 0.5;
  pieces[1].lo1 = -0.5;
  pieces[1].hi0 = 0.5;
  pieces[1].hi1 = 0.0;
  pieces[1].map =
      compose_coords(sigma.coords(), st_images(0, 1, 0, 0, 1, 0, -2, 0));
  // t in [1/2, 1]: sigma(2(1-t)s, 0).
  pieces[2].lo0 = 0.5;
  pieces[2].lo1 = 0.0;
  pieces[2].hi0 = 1.0;
  pieces[2].hi1 = 0.0;
  pieces[2].map =
      compose_coords(sigma.coords(), st_images(0, 2, 0, -2, 0, 0, 0, 0));
  return Bigon(std::move(pieces));
}

Bigon oriented_bigon(const Simplex2& sigma) {
  std::vector<BigonPiece> pieces(3);
  // t in [0, 1/2]: sigma(2t(1-s), 0).
  pieces[0].lo0 = 0.0;
  pieces[0].lo1 = 0.0;
  pieces[0].hi0 = 0.5;
  pieces[0].hi1 = 0.0;
  pieces[0].map =
      compose_coords(sigma.coords(), st_images(0, 0, 2, -2, 0, 0, 0, 0));
  // t in [1/2, 1-s/2]: sigma(1-s, 2t-1).
  pieces[1].lo0 = 0.5;
  pieces[1].lo1 = 0.0;
  pieces[1].hi0 = 1.0;
  pieces[1].hi1 = -0.5;
  pieces[1].map =
      compose_coords(sigma.coords(), st_images(1, -1, 0, 0, -1, 0, 2, 0));
  // t in [1-s/2, 1]: sigma(2t-1, 2t-1).
  pieces[2].lo0 = 1.0;
  pieces[2].lo1 = -0.5;
  pieces[2].hi0 = 1.0;
  pieces[2].hi1 = 0.0;
  pieces[2].map =
      compose_coords(sigma.coords(), st_images(-1, 0, 2, 0, -1, 0, 2, 0));
  return Bigon(std::move(pieces));
}

}  // namespace holab
