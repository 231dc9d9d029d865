#pragma once

#include <array>
#include <vector>

#include "holab/graded.hpp"
#include "holab/polynomial.hpp"

namespace holab {

// One polynomial arc [0,1] -> R^n, a polynomial in one variable per
// coordinate.
struct PathSegment {
  std::vector<Polynomial> coords;

  int dim() const { return static_cast<int>(coords.size()); }
  Vector eval(double u) const;
  Vector velocity(double u) const;
};

// Piecewise polynomial path. Consecutive segments must join within tol; the
// global parameter spreads uniformly over the segments.
class PLPath {
public:
  PLPath() = default;
  explicit PLPath(std::vector<PathSegment> segments, double tol = 1e-12);

  int dim() const;
  int segment_count() const { return static_cast<int>(segments_.size()); }
  const PathSegment& segment(int i) const { return segments_[i]; }

  Vector start() const;
  Vector end() const;
  Vector eval(double t) const;

  PLPath reversed() const;

private:
  std::vector<PathSegment> segments_;
};

PLPath concatenate(const PLPath& first, const PLPath& second,
                   double tol = 1e-12);

// Polynomial 2-simplex on the domain 1 >= t1 >= t2 >= 0.
class Simplex2 {
public:
  Simplex2() = default;
  explicit Simplex2(std::vector<Polynomial> coords);

  int dim() const { return static_cast<int>(coords_.size()); }
  const std::vector<Polynomial>& coords() const { return coords_; }

  Vector eval(double t1, double t2) const;
  // Columns are the partials in t1 and t2.
  Matrix jacobian(double t1, double t2) const;

private:
  std::vector<Polynomial> coords_;
};

// Folding map I^2 -> Delta_2: theta2(t,s) = q(lambda(t,s)) with
// lambda(t,s) = (s, 1-2t) for t <= 1/2, (2(1-t)s, 0) for t >= 1/2, and
// q(a,b) = (max(a,b), b). Every horizontal fiber starts at (1,1) and ends at
// (0,0).
Eigen::Vector2d theta2(double t, double s);

// Faces in simplex coordinates: face 0 is t -> sigma(1,t) (edge [v1,v2]),
// face 1 is t -> sigma(t,t) (edge [v0,v2]), face 2 is t -> sigma(t,0)
// (edge [v0,v1]).
PLPath face(const Simplex2& sigma, int i);

// v0 = sigma(0,0), v1 = sigma(1,0), v2 = sigma(1,1).
std::array<Vector, 3> vertices(const Simplex2& sigma);

// Front face Q1 = face 2 and back face P1 = face 0 of the 2-simplex.
PLPath front_edge(const Simplex2& sigma);
PLPath back_edge(const Simplex2& sigma);

// Edge path [v0,v1] followed by [v1,v2].
PLPath composite_edge(const Simplex2& sigma);

// One smooth sheet of a bigon: valid for lo0 + lo1*s <= t <= hi0 + hi1*s,
// with the map polynomial in the variables (s, t).
struct BigonPiece {
  double lo0 = 0.0, lo1 = 0.0;
  double hi0 = 1.0, hi1 = 0.0;
  std::vector<Polynomial> map;

  double lo(double s) const { return lo0 + lo1 * s; }
  double hi(double s) const { return hi0 + hi1 * s; }
};

// Piecewise polynomial map I^2 -> R^n whose t-endpoints are independent of s
// (a homotopy with fixed ends between the fibers at s = 0 and s = 1).
class Bigon {
public:
  Bigon() = default;
  explicit Bigon(std::vector<BigonPiece> pieces);

  int dim() const;
  int piece_count() const { return static_cast<int>(pieces_.size()); }
  const BigonPiece& piece(int i) const { return pieces_[i]; }

  int piece_index(double s, double t) const;
  Vector eval(double s, double t) const;
  Vector dt(double s, double t) const;
  Vector ds(double s, double t) const;

  // Interior seam positions for the given s, strictly inside (0,1).
  std::vector<double> seams(double s) const;

  // The fiber t -> Sigma(s,t) as a path with one segment per nonempty piece.
  PLPath fiber(double s) const;

private:
  std::vector<BigonPiece> pieces_;
};

// Literal composition sigma o Theta2. Fibers run from v2 at t = 0 to v0 at
// t = 1; the s = 0 fiber retraces the long edge backwards and the s = 1 fiber
// the composite edge backwards.
Bigon bigon_from_simplex(const Simplex2& sigma);

// The same sheet with both parameters reversed, Sigma(s,t) =
// (sigma o Theta2)(1-t, 1-s). Fibers run v0 to v2; s = 0 gives the composite
// edge and s = 1 the long edge, the boundary convention the surface holonomy
// formulas are stated in.
Bigon oriented_bigon(const Simplex2& sigma);

}  // namespace holab
