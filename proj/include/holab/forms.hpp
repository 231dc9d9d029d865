#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "holab/graded.hpp"
#include "holab/polynomial.hpp"

namespace holab {

// Matrix with polynomial entries, stored row-major. All entries share one
// variable count.
class PolyMatrix {
public:
  PolyMatrix() : rows_(0), cols_(0), nvars_(0) {}
  PolyMatrix(int rows, int cols, int nvars);
  static PolyMatrix constant(const Matrix& values, int nvars);
  static PolyMatrix identity(int n, int nvars);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nvars() const { return nvars_; }

  const Polynomial& operator()(int r, int c) const;
  Polynomial& operator()(int r, int c);

  Matrix eval(std::span<const double> x) const;
  PolyMatrix derivative(int axis) const;
  double max_abs_coeff() const;
  bool is_zero() const { return max_abs_coeff() == 0.0; }

  PolyMatrix& operator+=(const PolyMatrix& other);
  PolyMatrix& operator-=(const PolyMatrix& other);
  PolyMatrix& operator*=(double s);
  friend PolyMatrix operator+(PolyMatrix a, const PolyMatrix& b) { return a += b; }
  friend PolyMatrix operator-(PolyMatrix a, const PolyMatrix& b) { return a -= b; }
  friend PolyMatrix operator*(PolyMatrix a, double s) { return a *= s; }
  friend PolyMatrix operator*(double s, PolyMatrix a) { return a *= s; }
  friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b);

private:
  int rows_, cols_, nvars_;
  std::vector<Polynomial> entries_;
};

// Graded linear map whose blocks carry polynomial entries; evaluating at a
// point yields a GradedLinearMap. Blocks are keyed by source degree.
class GradedPolyMap {
public:
  GradedPolyMap() : degree_(0), nvars_(0) {}
  GradedPolyMap(GradedVectorSpace source, GradedVectorSpace target, int degree,
                int nvars);

  static GradedPolyMap zero(const GradedVectorSpace& source,
                            const GradedVectorSpace& target, int degree,
                            int nvars);
  static GradedPolyMap constant(const GradedLinearMap& value, int nvars);
  static GradedPolyMap identity(const GradedVectorSpace& space, int nvars);

  const GradedVectorSpace& source() const { return source_; }
  const GradedVectorSpace& target() const { return target_; }
  int degree() const { return degree_; }
  int nvars() const { return nvars_; }

  bool has_block(int source_degree) const;
  PolyMatrix block(int source_degree) const;
  void set_block(int source_degree, PolyMatrix m);
  const std::map<int, PolyMatrix>& blocks() const { return blocks_; }

  GradedLinearMap eval(const Vector& x) const;
  GradedPolyMap derivative(int axis) const;
  double max_abs_coeff() const;
  bool is_zero() const { return max_abs_coeff() == 0.0; }

  GradedPolyMap& operator+=(const GradedPolyMap& other);
  GradedPolyMap& operator-=(const GradedPolyMap& other);
  GradedPolyMap& operator*=(double s);
  friend GradedPolyMap operator+(GradedPolyMap a, const GradedPolyMap& b) {
    return a += b;
  }
  friend GradedPolyMap operator-(GradedPolyMap a, const GradedPolyMap& b) {
    return a -= b;
  }
  friend GradedPolyMap operator*(GradedPolyMap a, double s) { return a *= s; }
  friend GradedPolyMap operator*(double s, GradedPolyMap a) { return a *= s; }

private:
  GradedVectorSpace source_, target_;
  int degree_;
  int nvars_;
  std::map<int, PolyMatrix> blocks_;

  void check_shape(int source_degree, const PolyMatrix& m) const;
};

GradedPolyMap compose(const GradedPolyMap& f, const GradedPolyMap& g);
GradedPolyMap compose(const GradedLinearMap& f, const GradedPolyMap& g);
GradedPolyMap compose(const GradedPolyMap& f, const GradedLinearMap& g);

// Axis-aligned box domain.
class Chart {
public:
  Chart() = default;
  Chart(std::string id, std::vector<double> lo, std::vector<double> hi);

  const std::string& id() const { return id_; }
  int dim() const { return static_cast<int>(lo_.size()); }
  const std::vector<double>& lo() const { return lo_; }
  const std::vector<double>& hi() const { return hi_; }
  bool contains(const Vector& x, double slack = 1e-9) const;

private:
  std::string id_;
  std::vector<double> lo_, hi_;
};

// Deterministic low-discrepancy sample points inside the chart box. The
// Halton index is offset by a hash of the chart id so distinct charts get
// distinct streams while runs stay reproducible.
std::vector<Vector> chart_samples(const Chart& chart, int count);

// Differential form on a chart with values in graded endomorphisms of one
// fixed inner degree. Only strictly increasing index tuples are stored;
// evaluation is multilinear and antisymmetric,
//   form(x; v_1..v_k) = sum_I component_I(x) * det(v_b[I_a]).
class EndValuedForm {
public:
  EndValuedForm() : nvars_(0), form_degree_(0), inner_degree_(0) {}
  EndValuedForm(GradedVectorSpace space, int nvars, int form_degree,
                int inner_degree);

  const GradedVectorSpace& space() const { return space_; }
  int nvars() const { return nvars_; }
  int form_degree() const { return form_degree_; }
  int inner_degree() const { return inner_degree_; }

  void set_component(const std::vector<int>& index, GradedPolyMap value);
  void add_to_component(const std::vector<int>& index,
                        const GradedPolyMap& value);
  GradedPolyMap component(const std::vector<int>& index) const;
  const std::map<std::vector<int>, GradedPolyMap>& components() const {
    return components_;
  }
  bool is_zero() const { return components_.empty(); }
  double max_abs_coeff() const;

  GradedLinearMap eval(const Vector& x,
                       const std::vector<Vector>& vectors) const;

  EndValuedForm& operator+=(const EndValuedForm& other);
  EndValuedForm& operator-=(const EndValuedForm& other);
  EndValuedForm& operator*=(double s);
  friend EndValuedForm operator+(EndValuedForm a, const EndValuedForm& b) {
    return a += b;
  }
  friend EndValuedForm operator-(EndValuedForm a, const EndValuedForm& b) {
    return a -= b;
  }
  friend EndValuedForm operator*(EndValuedForm a, double s) { return a *= s; }
  friend EndValuedForm operator*(double s, EndValuedForm a) { return a *= s; }

private:
  GradedVectorSpace space_;
  int nvars_;
  int form_degree_;
  int inner_degree_;
  std::map<std::vector<int>, GradedPolyMap> components_;

  void check_index(const std::vector<int>& index) const;
};

// Coefficientwise exterior derivative; raises form degree by one.
EndValuedForm exterior_d(const EndValuedForm& form);

// Wedge that merges index tuples with the shuffle sign and composes values,
// (alpha (x) A) ^ (beta (x) B) = (alpha ^ beta) (x) (A o B), with no extra
// sign. Form degrees and inner degrees add.
EndValuedForm wedge_plain(const EndValuedForm& a, const EndValuedForm& b);

// wedge_plain twisted by the Koszul sign (-1)^(inner degree of a's values
// times form degree of b).
EndValuedForm wedge_compose(const EndValuedForm& a, const EndValuedForm& b);

// Post/pre-composition of every component with a constant map.
EndValuedForm compose_left(const GradedLinearMap& f, const EndValuedForm& form);
EndValuedForm compose_right(const EndValuedForm& form, const GradedLinearMap& f);

// Local superconnection data: the fiber differential (degree 0 component of
// the total connection) lives in complex; omega1 is a 1-form of inner degree
// 0, omega2 a 2-form of inner degree -1, omega3 an optional 3-form of inner
// degree -2.
struct Superconnection {
  Chart chart;
  CochainComplex complex;
  EndValuedForm omega1;
  EndValuedForm omega2;
  std::optional<EndValuedForm> omega3;
};

struct FlatnessResiduals {
  double degree1 = 0.0;
  double degree2 = 0.0;
  double degree3 = 0.0;
  double max() const;
};

// Residual norms of the three graded flatness identities,
//   d.w1 - w1.d = 0
//   d.w2 + w2.d - (exterior_d(w1) + w1 ^ w1) = 0
//   exterior_d(w2) + w1 ^ w2 - w2 ^ w1 - (d.w3 - w3.d) = 0
// where . is plain composition with the fiber differential and ^ the plain
// composition wedge. Residual forms are assembled symbolically once and the
// reported numbers are maxima over the samples and over the component basis.
FlatnessResiduals flatness_residuals(const Superconnection& S,
                                     const std::vector<Vector>& samples);

// Builds the superconnection gauge-equivalent to the bare fiber differential
// through the total-degree-zero frame phi = phi0 + phi1, so the result is
// flat by construction. phi0 must be chain-map valued and admit a polynomial
// inverse (constant part invertible, variable part nilpotent); phi1 has form
// degree 1 and inner degree -1.
Superconnection gauge_flat(const Chart& chart, const CochainComplex& complex,
                           const GradedPolyMap& phi0,
                           const EndValuedForm& phi1);

}  // namespace holab
