#include "holab/forms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <sstream>

namespace holab {

namespace {

MultiIndex zero_exponents(int nvars) { return MultiIndex(nvars, 0); }

std::string index_string(const std::vector<int>& index) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < index.size(); ++i)
    os << (i ? "," : "") << index[i];
  os << ")";
  return os.str();
}

}  // namespace

PolyMatrix::PolyMatrix(int rows, int cols, int nvars)
    : rows_(rows), cols_(cols), nvars_(nvars) {
  if (rows < 0 || cols < 0 || nvars < 0)
    throw StructuralError("PolyMatrix: negative shape");
  entries_.assign(static_cast<std::size_t>(rows) * cols, Polynomial(nvars));
}

PolyMatrix PolyMatrix::constant(const Matrix& values, int nvars) {
  PolyMatrix out(static_cast<int>(values.rows()), static_cast<int>(values.cols()),
                 nvars);
  for (int r = 0; r < out.rows_; ++r)
    for (int c = 0; c < out.cols_; ++c)
      if (values(r, c) != 0.0)
        out(r, c) = Polynomial::constant(nvars, values(r, c));
  return out;
}

PolyMatrix PolyMatrix::identity(int n, int nvars) {
  PolyMatrix out(n, n, nvars);
  for (int i = 0; i < n; ++i) out(i, i) = Polynomial::constant(nvars, 1.0);
  return out;
}

const Polynomial& PolyMatrix::operator()(int r, int c) const {
  return entries_[static_cast<std::size_t>(r) * cols_ + c];
}

Polynomial& PolyMatrix::operator()(int r, int c) {
  return entries_[static_cast<std::size_t>(r) * cols_ + c];
}

Matrix PolyMatrix::eval(std::span<const double> x) const {
  Matrix out(rows_, cols_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) out(r, c) = (*this)(r, c)(x);
  return out;
}

PolyMatrix PolyMatrix::derivative(int axis) const {
  PolyMatrix out(rows_, cols_, nvars_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) out(r, c) = (*this)(r, c).derivative(axis);
  return out;
}

double PolyMatrix::max_abs_coeff() const {
  double worst = 0.0;
  for (const Polynomial& p : entries_) worst = std::max(worst, p.max_abs_coeff());
  return worst;
}

PolyMatrix& PolyMatrix::operator+=(const PolyMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_ || nvars_ != other.nvars_)
    throw StructuralError("PolyMatrix: shape mismatch in addition");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

PolyMatrix& PolyMatrix::operator-=(const PolyMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_ || nvars_ != other.nvars_)
    throw StructuralError("PolyMatrix: shape mismatch in subtraction");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

PolyMatrix& PolyMatrix::operator*=(double s) {
  for (Polynomial& p : entries_) p *= s;
  return *this;
}

PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.cols() != b.rows() || a.nvars() != b.nvars())
    throw StructuralError("PolyMatrix: shape mismatch in product");
  PolyMatrix out(a.rows(), b.cols(), a.nvars());
  for (int r = 0; r < a.rows(); ++r)
    for (int k = 0; k < a.cols(); ++k) {
      const Polynomial& left = a(r, k);
      if (left.is_zero()) continue;
      for (int c = 0; c < b.cols(); ++c) {
        if (b(k, c).is_zero()) continue;
        out(r, c) += left * b(k, c);
      }
    }
  return out;
}

GradedPolyMap::GradedPolyMap(GradedVectorSpace source, GradedVectorSpace target,
                             int degree, int nvars)
    : source_(std::move(source)),
      target_(std::move(target)),
      degree_(degree),
      nvars_(nvars) {}

GradedPolyMap GradedPolyMap::zero(const GradedVectorSpace& source,
                                  const GradedVectorSpace& target, int degree,
                                  int nvars) {
  return GradedPolyMap(source, target, degree, nvars);
}

GradedPolyMap GradedPolyMap::constant(const GradedLinearMap& value, int nvars) {
  GradedPolyMap out(value.source(), value.target(), value.degree(), nvars);
  for (const auto& [deg, m] : value.blocks())
    out.set_block(deg, PolyMatrix::constant(m, nvars));
  return out;
}

GradedPolyMap GradedPolyMap::identity(const GradedVectorSpace& space, int nvars) {
  return constant(GradedLinearMap::identity(space), nvars);
}

bool GradedPolyMap::has_block(int source_degree) const {
  return blocks_.count(source_degree) != 0;
}

PolyMatrix GradedPolyMap::block(int source_degree) const {
  auto it = blocks_.find(source_degree);
  if (it != blocks_.end()) return it->second;
  return PolyMatrix(target_.dim(source_degree + degree_),
                    source_.dim(source_degree), nvars_);
}

void GradedPolyMap::check_shape(int source_degree, const PolyMatrix& m) const {
  const int rows = target_.dim(source_degree + degree_);
  const int cols = source_.dim(source_degree);
  if (m.rows() != rows || m.cols() != cols || m.nvars() != nvars_) {
    std::ostringstream os;
    os << "GradedPolyMap: block shape mismatch in source degree " << source_degree;
    throw StructuralError(os.str());
  }
}

void GradedPolyMap::set_block(int source_degree, PolyMatrix m) {
  check_shape(source_degree, m);
  if (m.rows() == 0 || m.cols() == 0 || m.is_zero()) {
    blocks_.erase(source_degree);
    return;
  }
  blocks_[source_degree] = std::move(m);
}

GradedLinearMap GradedPolyMap::eval(const Vector& x) const {
  if (static_cast<int>(x.size()) != nvars_)
    throw StructuralError("GradedPolyMap: evaluation point has wrong dimension");
  std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
  GradedLinearMap out(source_, target_, degree_);
  for (const auto& [deg, m] : blocks_) out.set_block(deg, m.eval(xs));
  return out;
}

GradedPolyMap GradedPolyMap::derivative(int axis) const {
  GradedPolyMap out(source_, target_, degree_, nvars_);
  for (const auto& [deg, m] : blocks_) out.set_block(deg, m.derivative(axis));
  return out;
}

double GradedPolyMap::max_abs_coeff() const {
  double worst = 0.0;
  for (const auto& [deg, m] : blocks_) worst = std::max(worst, m.max_abs_coeff());
  return worst;
}

GradedPolyMap& GradedPolyMap::operator+=(const GradedPolyMap& other) {
  if (!(source_ == other.source_) || !(target_ == other.target_) ||
      degree_ != other.degree_ || nvars_ != other.nvars_)
    throw StructuralError("GradedPolyMap: mismatch in addition");
  for (const auto& [deg, m] : other.blocks_) set_block(deg, block(deg) + m);
  return *this;
}

GradedPolyMap& GradedPolyMap::operator-=(const GradedPolyMap& other) {
  if (!(source_ == other.source_) || !(target_ == other.target_) ||
      degree_ != other.degree_ || nvars_ != other.nvars_)
    throw StructuralError("GradedPolyMap: mismatch in subtraction");
  for (const auto& [deg, m] : other.blocks_) set_block(deg, block(deg) - m);
  return *this;
}

GradedPolyMap& GradedPolyMap::operator*=(double s) {
  if (s == 0.0) {
    blocks_.clear();
    return *this;
  }
  for (auto& [deg, m] : blocks_) m *= s;
  return *this;
}

GradedPolyMap compose(const GradedPolyMap& f, const GradedPolyMap& g) {
  if (!(f.source() == g.target()) || f.nvars() != g.nvars())
    throw StructuralError("GradedPolyMap: composition mismatch");
  GradedPolyMap out(g.source(), f.target(), f.degree() + g.degree(), f.nvars());
  for (const auto& [deg, gb] : g.blocks()) {
    if (!f.has_block(deg + g.degree())) continue;
    out.set_block(deg, f.block(deg + g.degree()) * gb);
  }
  return out;
}

GradedPolyMap compose(const GradedLinearMap& f, const GradedPolyMap& g) {
  return compose(GradedPolyMap::constant(f, g.nvars()), g);
}

GradedPolyMap compose(const GradedPolyMap& f, const GradedLinearMap& g) {
  return compose(f, GradedPolyMap::constant(g, f.nvars()));
}

Chart::Chart(std::string id, std::vector<double> lo, std::vector<double> hi)
    : id_(std::move(id)), lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.size() != hi_.size() || lo_.empty())
    throw StructuralError("Chart: bound arrays must be nonempty and equal length");
  for (std::size_t i = 0; i < lo_.size(); ++i)
    if (!(lo_[i] < hi_[i]))
      throw StructuralError("Chart: lower bound must be below upper bound");
}

bool Chart::contains(const Vector& x, double slack) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  for (int i = 0; i < dim(); ++i)
    if (x(i) < lo_[i] - slack || x(i) > hi_[i] + slack) return false;
  return true;
}

std::vector<Vector> chart_samples(const Chart& chart, int count) {
  static constexpr std::uint32_t kPrimes[] = {2,  3,  5,  7,  11,
                                              13, 17, 19, 23, 29};
  const int n = chart.dim();
  if (n > static_cast<int>(std::size(kPrimes)))
    throw StructuralError("chart_samples: chart dimension exceeds sampling table");
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : chart.id()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  const std::uint64_t offset = h % 1009;
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int k = 0; k < count; ++k) {
    Vector x(n);
    for (int a = 0; a < n; ++a) {
      const double t = halton(offset + 1 + static_cast<std::uint64_t>(k), kPrimes[a]);
      x(a) = chart.lo()[a] + t * (chart.hi()[a] - chart.lo()[a]);
    }
    out.push_back(std::move(x));
  }
  return out;
}

EndValuedForm::EndValuedForm(GradedVectorSpace space, int nvars, int form_degree,
                             int inner_degree)
    : space_(std::move(space)),
      nvars_(nvars),
      form_degree_(form_degree),
      inner_degree_(inner_degree) {
  if (form_degree < 0 || nvars < 0)
    throw StructuralError("EndValuedForm: negative form degree or variable count");
}

void EndValuedForm::check_index(const std::vector<int>& index) const {
  if (static_cast<int>(index.size()) != form_degree_)
    throw StructuralError("EndValuedForm: index tuple length differs from form degree");
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] < 0 || index[i] >= nvars_)
      throw StructuralError("EndValuedForm: index " + index_string(index) +
                            " out of range");
    if (i + 1 < index.size() && index[i] >= index[i + 1])
      throw StructuralError("EndValuedForm: index " + index_string(index) +
                            " is not strictly increasing");
  }
}

void EndValuedForm::set_component(const std::vector<int>& index,
                                  GradedPolyMap value) {
  check_index(index);
  if (value.degree() != inner_degree_ || !(value.source() == space_) ||
      !(value.target() == space_) || value.nvars() != nvars_)
    throw StructuralError("EndValuedForm: component value mismatch at " +
                          index_string(index));
  if (value.is_zero()) {
    components_.erase(index);
    return;
  }
  components_[index] = std::move(value);
}

void EndValuedForm::add_to_component(const std::vector<int>& index,
                                     const GradedPolyMap& value) {
  set_component(index, component(index) + value);
}

GradedPolyMap EndValuedForm::component(const std::vector<int>& index) const {
  check_index(index);
  auto it = components_.find(index);
  if (it != components_.end()) return it->second;
  return GradedPolyMap(space_, space_, inner_degree_, nvars_);
}

double EndValuedForm::max_abs_coeff() const {
  double worst = 0.0;
  for (const auto& [idx, m] : components_)
    worst = std::max(worst, m.max_abs_coeff());
  return worst;
}

GradedLinearMap EndValuedForm::eval(const Vector& x,
                                    const std::vector<Vector>& vectors) const {
  if (static_cast<int>(vectors.size()) != form_degree_)
    throw StructuralError("EndValuedForm: evaluation needs as many vectors as the form degree");
  if (static_cast<int>(x.size()) != nvars_)
    throw StructuralError("EndValuedForm: evaluation point has wrong dimension");
  for (const Vector& v : vectors)
    if (static_cast<int>(v.size()) != nvars_)
      throw StructuralError("EndValuedForm: tangent vector has wrong dimension");
  GradedLinearMap out = GradedLinearMap::zero(space_, space_, inner_degree_);
  const int k = form_degree_;
  for (const auto& [idx, m] : components_) {
    double factor = 1.0;
    if (k > 0) {
      Matrix d(k, k);
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) d(a, b) = vectors[b](idx[a]);
      factor = d.determinant();
    }
    if (factor == 0.0) continue;
    out += factor * m.eval(x);
  }
  return out;
}

EndValuedForm& EndValuedForm::operator+=(const EndValuedForm& other) {
  if (!(space_ == other.space_) || nvars_ != other.nvars_ ||
      form_degree_ != other.form_degree_ || inner_degree_ != other.inner_degree_)
    throw StructuralError("EndValuedForm: mismatch in addition");
  for (const auto& [idx, m] : other.components_) add_to_component(idx, m);
  return *this;
}

EndValuedForm& EndValuedForm::operator-=(const EndValuedForm& other) {
  EndValuedForm neg = other;
  neg *= -1.0;
  return *this += neg;
}

EndValuedForm& EndValuedForm::operator*=(double s) {
  if (s == 0.0) {
    components_.clear();
    return *this;
  }
  for (auto& [idx, m] : components_) m *= s;
  return *this;
}

EndValuedForm exterior_d(const EndValuedForm& form) {
  EndValuedForm out(form.space(), form.nvars(), form.form_degree() + 1,
                    form.inner_degree());
  for (const auto& [idx, m] : form.components()) {
    for (int axis = 0; axis < form.nvars(); ++axis) {
      if (std::binary_search(idx.begin(), idx.end(), axis)) continue;
      GradedPolyMap dm = m.derivative(axis);
      if (dm.is_zero()) continue;
      std::vector<int> merged = idx;
      const auto pos = std::lower_bound(merged.begin(), merged.end(), axis);
      const int before = static_cast<int>(pos - merged.begin());
      merged.insert(pos, axis);
      if (before % 2 != 0) dm *= -1.0;
      out.add_to_component(merged, dm);
    }
  }
  return out;
}

namespace {

// Merges two strictly increasing tuples; returns false when they collide,
// otherwise fills the shuffle sign of moving the concatenation into order.
bool merge_indices(const std::vector<int>& a, const std::vector<int>& b,
                   std::vector<int>& merged, int& sign) {
  merged.clear();
  merged.reserve(a.size() + b.size());
  int inversions = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return false;
    if (a[i] < b[j]) {
      merged.push_back(a[i++]);
    } else {
      inversions += static_cast<int>(a.size() - i);
      merged.push_back(b[j++]);
    }
  }
  while (i < a.size()) merged.push_back(a[i++]);
  while (j < b.size()) merged.push_back(b[j++]);
  sign = (inversions % 2 == 0) ? 1 : -1;
  return true;
}

}  // namespace

EndValuedForm wedge_plain(const EndValuedForm& a, const EndValuedForm& b) {
  if (!(a.space() == b.space()) || a.nvars() != b.nvars())
    throw StructuralError("wedge_plain: operand mismatch");
  EndValuedForm out(a.space(), a.nvars(), a.form_degree() + b.form_degree(),
                    a.inner_degree() + b.inner_degree());
  std::vector<int> merged;
  for (const auto& [ia, ma] : a.components()) {
    for (const auto& [ib, mb] : b.components()) {
      int sign = 1;
      if (!merge_indices(ia, ib, merged, sign)) continue;
      GradedPolyMap prod = compose(ma, mb);
      if (prod.is_zero()) continue;
      if (sign < 0) prod *= -1.0;
      out.add_to_component(merged, prod);
    }
  }
  return out;
}

EndValuedForm wedge_compose(const EndValuedForm& a, const EndValuedForm& b) {
  EndValuedForm out = wedge_plain(a, b);
  if ((a.inner_degree() * b.form_degree()) % 2 != 0) out *= -1.0;
  return out;
}

EndValuedForm compose_left(const GradedLinearMap& f, const EndValuedForm& form) {
  if (!(f.source() == form.space()) || !(f.target() == form.space()))
    throw StructuralError("compose_left: constant map must be an endomorphism of the form's space");
  EndValuedForm out(form.space(), form.nvars(), form.form_degree(),
                    form.inner_degree() + f.degree());
  for (const auto& [idx, m] : form.components())
    out.add_to_component(idx, compose(f, m));
  return out;
}

EndValuedForm compose_right(const EndValuedForm& form, const GradedLinearMap& f) {
  if (!(f.source() == form.space()) || !(f.target() == form.space()))
    throw StructuralError("compose_right: constant map must be an endomorphism of the form's space");
  EndValuedForm out(form.space(), form.nvars(), form.form_degree(),
                    form.inner_degree() + f.degree());
  for (const auto& [idx, m] : form.components())
    out.add_to_component(idx, compose(m, f));
  return out;
}

double FlatnessResiduals::max() const {
  return std::max(degree1, std::max(degree2, degree3));
}

namespace {

double max_component_norm(const EndValuedForm& f, const Vector& x) {
  double worst = 0.0;
  for (const auto& [idx, m] : f.components())
    worst = std::max(worst, norm(m.eval(x)));
  return worst;
}

}  // namespace

FlatnessResiduals flatness_residuals(const Superconnection& S,
                                     const std::vector<Vector>& samples) {
  const GradedLinearMap& d = S.complex.differential();
  const EndValuedForm r1 =
      compose_left(d, S.omega1) - compose_right(S.omega1, d);
  const EndValuedForm r2 = compose_left(d, S.omega2) +
                           compose_right(S.omega2, d) - exterior_d(S.omega1) -
                           wedge_plain(S.omega1, S.omega1);
  EndValuedForm r3 = exterior_d(S.omega2) + wedge_plain(S.omega1, S.omega2) -
                     wedge_plain(S.omega2, S.omega1);
  if (S.omega3.has_value())
    r3 -= compose_left(d, *S.omega3) - compose_right(*S.omega3, d);
  FlatnessResiduals out;
  for (const Vector& x : samples) {
    out.degree1 = std::max(out.degree1, max_component_norm(r1, x));
    out.degree2 = std::max(out.degree2, max_component_norm(r2, x));
    out.degree3 = std::max(out.degree3, max_component_norm(r3, x));
  }
  return out;
}

namespace {

// Total-degree homogeneous element of the form-valued endomorphism algebra,
// split by form degree. Form degrees above three never feed the stored
// superconnection components, so products are truncated there.
struct GradedElement {
  int total = 0;
  std::array<EndValuedForm, 4> comp;

  static GradedElement zero(const GradedVectorSpace& space, int nvars, int total) {
    GradedElement e;
    e.total = total;
    for (int p = 0; p < 4; ++p)
      e.comp[p] = EndValuedForm(space, nvars, p, total - p);
    return e;
  }

  static GradedElement unit(const GradedVectorSpace& space, int nvars) {
    GradedElement e = zero(space, nvars, 0);
    e.comp[0].set_component({}, GradedPolyMap::identity(space, nvars));
    return e;
  }
};

GradedElement mul(const GradedElement& a, const GradedElement& b) {
  const GradedVectorSpace& space = a.comp[0].space();
  GradedElement out =
      GradedElement::zero(space, a.comp[0].nvars(), a.total + b.total);
  for (int p = 0; p <= 3; ++p) {
    if (a.comp[p].is_zero()) continue;
    for (int q = 0; p + q <= 3; ++q) {
      if (b.comp[q].is_zero()) continue;
      out.comp[p + q] += wedge_compose(a.comp[p], b.comp[q]);
    }
  }
  return out;
}

GradedElement sub(GradedElement a, const GradedElement& b) {
  for (int p = 0; p <= 3; ++p) a.comp[p] -= b.comp[p];
  return a;
}

GradedElement exterior_d(const GradedElement& a) {
  const GradedVectorSpace& space = a.comp[0].space();
  GradedElement out = GradedElement::zero(space, a.comp[0].nvars(), a.total + 1);
  for (int p = 0; p <= 2; ++p) out.comp[p + 1] += exterior_d(a.comp[p]);
  return out;
}

double max_abs_coeff(const GradedElement& a) {
  double worst = 0.0;
  for (int p = 0; p <= 3; ++p)
    worst = std::max(worst, a.comp[p].max_abs_coeff());
  return worst;
}

}  // namespace

Superconnection gauge_flat(const Chart& chart, const CochainComplex& complex,
                           const GradedPolyMap& phi0,
                           const EndValuedForm& phi1) {
  const GradedVectorSpace& V = complex.space();
  const int n = chart.dim();
  if (phi0.degree() != 0 || !(phi0.source() == V) || !(phi0.target() == V) ||
      phi0.nvars() != n)
    throw StructuralError("gauge_flat: phi0 must be a degree-0 endomorphism field on the chart");
  if (!(phi1.space() == V) || phi1.nvars() != n || phi1.form_degree() != 1 ||
      phi1.inner_degree() != -1)
    throw StructuralError("gauge_flat: phi1 must be a 1-form of inner degree -1");

  for (const Vector& x : chart_samples(chart, 50)) {
    const double cond = max_condition_number(phi0.eval(x));
    if (!(cond < 1e12)) {
      std::ostringstream os;
      os << "gauge_flat: phi0 is singular or near-singular at sampled point (";
      for (int i = 0; i < n; ++i) os << (i ? "," : "") << x(i);
      os << ")";
      throw DomainError(os.str());
    }
  }

  // Polynomial inverse: with phi0 = C + N and C the coefficient of the zero
  // multi-index, the Neumann series of C^{-1}N must terminate.
  GradedLinearMap C(V, V, 0);
  for (const auto& [deg, blk] : phi0.blocks()) {
    Matrix c(blk.rows(), blk.cols());
    for (int r = 0; r < blk.rows(); ++r)
      for (int s = 0; s < blk.cols(); ++s)
        c(r, s) = blk(r, s).coeff(zero_exponents(n));
    C.set_block(deg, c);
  }
  const GradedLinearMap Cinv = inverse(C);
  const GradedPolyMap M = compose(Cinv, phi0 - GradedPolyMap::constant(C, n));
  GradedPolyMap series = GradedPolyMap::identity(V, n);
  GradedPolyMap term = GradedPolyMap::identity(V, n);
  bool terminated = false;
  for (int k = 1; k <= 64; ++k) {
    term = compose(M, term);
    term *= -1.0;
    // Relative termination rather than an exact zero test: when C is not
    // exactly invertible in floating point, the powers of M bottom out at
    // rounding noise instead of vanishing, and folding that noise into the
    // series would bloat every symbolic product consuming phi0^{-1} later.
    if (term.max_abs_coeff() <= 1e-13 * (1.0 + series.max_abs_coeff())) {
      terminated = true;
      break;
    }
    series += term;
  }
  if (!terminated)
    throw DomainError("gauge_flat: phi0 has no polynomial inverse; its variable part is not nilpotent");
  const GradedPolyMap phi0inv = compose(series, Cinv);
  {
    const GradedPolyMap resid =
        compose(phi0inv, phi0) - GradedPolyMap::identity(V, n);
    const double scale =
        1.0 + phi0.max_abs_coeff() * (1.0 + phi0inv.max_abs_coeff());
    if (resid.max_abs_coeff() > 1e-9 * scale)
      throw DomainError("gauge_flat: polynomial inverse of phi0 failed verification");
  }

  GradedElement phi_el = GradedElement::zero(V, n, 0);
  phi_el.comp[0].set_component({}, phi0);
  phi_el.comp[1] = phi1;

  GradedElement inv0 = GradedElement::zero(V, n, 0);
  inv0.comp[0].set_component({}, phi0inv);
  GradedElement phi1_el = GradedElement::zero(V, n, 0);
  phi1_el.comp[1] = phi1;

  // Inverse of phi = phi0 + phi1 as a finite alternating series in the
  // form-degree-raising factor X = phi0^{-1} phi1.
  const GradedElement X = mul(inv0, phi1_el);
  GradedElement psi = GradedElement::zero(V, n, 0);
  GradedElement pw = GradedElement::unit(V, n);
  for (int k = 0; k <= 3; ++k) {
    GradedElement t = mul(pw, inv0);
    if (k % 2 != 0)
      for (int p = 0; p <= 3; ++p) t.comp[p] *= -1.0;
    for (int p = 0; p <= 3; ++p) psi.comp[p] += t.comp[p];
    if (k < 3) pw = mul(pw, X);
  }
  {
    const GradedElement check = sub(mul(psi, phi_el), GradedElement::unit(V, n));
    const double scale = 1.0 + max_abs_coeff(psi) * (1.0 + max_abs_coeff(phi_el));
    if (max_abs_coeff(check) > 1e-9 * scale)
      throw DomainError("gauge_flat: inverse frame failed verification");
  }

  GradedElement delta = GradedElement::zero(V, n, 1);
  delta.comp[0].set_component(
      {}, GradedPolyMap::constant(complex.differential(), n));

  const GradedElement chi = sub(mul(delta, phi_el), exterior_d(phi_el));
  const GradedElement mu = mul(psi, chi);

  {
    const GradedPolyMap mu0 = mu.comp[0].component({});
    const GradedPolyMap dref =
        GradedPolyMap::constant(complex.differential(), n);
    const double scale = 1.0 + mu0.max_abs_coeff() + dref.max_abs_coeff();
    if ((mu0 - dref).max_abs_coeff() > 1e-9 * scale)
      throw PreconditionError(
          "gauge_flat: phi0 must be chain-map valued so the degree-0 term of the gauged connection is the fiber differential");
  }

  Superconnection S;
  S.chart = chart;
  S.complex = complex;
  S.omega1 = -1.0 * mu.comp[1];
  S.omega2 = -1.0 * mu.comp[2];
  if (!mu.comp[3].is_zero()) S.omega3 = mu.comp[3];
  return S;
}

}  // namespace holab
