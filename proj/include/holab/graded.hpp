#pragma once

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "holab/core.hpp"

namespace holab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Finite-dimensional graded vector space: a dimension per integer degree.
// Degrees with dimension zero are not stored.
class GradedVectorSpace {
public:
  GradedVectorSpace() = default;
  explicit GradedVectorSpace(std::map<int, int> dims);

  int dim(int degree) const;
  int total_dim() const;
  const std::map<int, int>& dims() const { return dims_; }
  std::vector<int> degrees() const;

  friend bool operator==(const GradedVectorSpace& a, const GradedVectorSpace& b) {
    return a.dims_ == b.dims_;
  }

private:
  std::map<int, int> dims_;
};

// Homogeneous linear map of fixed degree d between graded spaces: a block per
// source degree k mapping V^k -> W^{k+d}. Absent blocks are zero. Blocks whose
// source or target dimension vanishes are never stored.
class GradedLinearMap {
public:
  GradedLinearMap() = default;
  GradedLinearMap(GradedVectorSpace source, GradedVectorSpace target, int degree);

  static GradedLinearMap zero(const GradedVectorSpace& source,
                              const GradedVectorSpace& target, int degree);
  static GradedLinearMap identity(const GradedVectorSpace& space);

  const GradedVectorSpace& source() const { return source_; }
  const GradedVectorSpace& target() const { return target_; }
  int degree() const { return degree_; }

  bool has_block(int source_degree) const;
  // Returns the stored block, or a correctly shaped zero matrix.
  Matrix block(int source_degree) const;
  void set_block(int source_degree, Matrix m);
  const std::map<int, Matrix>& blocks() const { return blocks_; }

  // Degrees k for which a block slot exists (both dimensions positive).
  std::vector<int> block_degrees() const;

  GradedLinearMap& operator+=(const GradedLinearMap& other);
  GradedLinearMap& operator-=(const GradedLinearMap& other);
  GradedLinearMap& operator*=(double s);
  friend GradedLinearMap operator+(GradedLinearMap a, const GradedLinearMap& b) {
    return a += b;
  }
  friend GradedLinearMap operator-(GradedLinearMap a, const GradedLinearMap& b) {
    return a -= b;
  }
  friend GradedLinearMap operator*(GradedLinearMap a, double s) { return a *= s; }
  friend GradedLinearMap operator*(double s, GradedLinearMap a) { return a *= s; }

private:
  GradedVectorSpace source_, target_;
  int degree_ = 0;
  std::map<int, Matrix> blocks_;
  void check_shape(int source_degree, const Matrix& m) const;
};

// f after g (apply g first). Degrees add.
GradedLinearMap compose(const GradedLinearMap& f, const GradedLinearMap& g);

// Frobenius norm across all blocks.
double norm(const GradedLinearMap& f);

// Blockwise inverse of a degree-0 endomorphism-shaped map. Throws DomainError
// naming the degree whose block is singular.
GradedLinearMap inverse(const GradedLinearMap& f, double cond_limit = 1e14);

// Largest blockwise condition number (1 for absent blocks).
double max_condition_number(const GradedLinearMap& f);

struct ExactnessResult {
  GradedLinearMap witness;  // degree -2 map k minimizing |(dk + kd variant) - X|
  double residual = 0.0;
  bool is_exact = false;
};

// Cochain complex (V, d) with d of degree +1 and d∘d = 0. The least-squares
// solver for the exactness quotient in degree -1 is built eagerly at
// construction and shared by copies.
class CochainComplex {
public:
  CochainComplex() = default;
  // Validates d∘d = 0 (relative tolerance) and shape compatibility.
  CochainComplex(GradedVectorSpace space, GradedLinearMap d, double tol = 1e-12);
  // Skips the d∘d = 0 check; for linear-algebra fixtures only.
  static CochainComplex unchecked(GradedVectorSpace space, GradedLinearMap d);

  const GradedVectorSpace& space() const { return space_; }
  const GradedLinearMap& differential() const { return d_; }

  // Least squares solve of (d k - k d) = X over degree -2 maps k, using the
  // cached pseudoinverse. X must have degree -1.
  ExactnessResult solve_exactness(const GradedLinearMap& X,
                                  double tol = 1e-8) const;

private:
  GradedVectorSpace space_;
  GradedLinearMap d_;
  struct Solver;
  std::shared_ptr<const Solver> solver_;
  void build_solver();
};

// dX - (-1)^{deg X} X d.
GradedLinearMap graded_commutator_with_differential(const CochainComplex& complex,
                                                    const GradedLinearMap& X);

}  // namespace holab
