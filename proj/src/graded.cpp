#include "holab/graded.hpp"

#include <Eigen/QR>
#include <sstream>

namespace holab {

GradedVectorSpace::GradedVectorSpace(std::map<int, int> dims) {
  for (const auto& [deg, dim] : dims) {
    if (dim < 0) {
      std::ostringstream msg;
      msg << "negative dimension " << dim << " in degree " << deg;
      throw StructuralError(msg.str());
    }
    if (dim > 0) dims_[deg] = dim;
  }
}

int GradedVectorSpace::dim(int degree) const {
  auto it = dims_.find(degree);
  return it == dims_.end() ? 0 : it->second;
}

int GradedVectorSpace::total_dim() const {
  int total = 0;
  for (const auto& [deg, dim] : dims_) total += dim;
  return total;
}

std::vector<int> GradedVectorSpace::degrees() const {
  std::vector<int> out;
  out.reserve(dims_.size());
  for (const auto& [deg, dim] : dims_) out.push_back(deg);
  return out;
}

GradedLinearMap::GradedLinearMap(GradedVectorSpace source, GradedVectorSpace target,
                                 int degree)
    : source_(std::move(source)), target_(std::move(target)), degree_(degree) {}

GradedLinearMap GradedLinearMap::zero(const GradedVectorSpace& source,
                                      const GradedVectorSpace& target, int degree) {
  return GradedLinearMap(source, target, degree);
}

GradedLinearMap GradedLinearMap::identity(const GradedVectorSpace& space) {
  GradedLinearMap id(space, space, 0);
  for (int deg : space.degrees())
    id.set_block(deg, Matrix::Identity(space.dim(deg), space.dim(deg)));
  return id;
}

void GradedLinearMap::check_shape(int source_degree, const Matrix& m) const {
  const int rows = target_.dim(source_degree + degree_);
  const int cols = source_.dim(source_degree);
  if (m.rows() != rows || m.cols() != cols) {
    std::ostringstream msg;
    msg << "block at source degree " << source_degree << " must be " << rows << "x"
        << cols << ", got " << m.rows() << "x" << m.cols();
    throw StructuralError(msg.str());
  }
}

bool GradedLinearMap::has_block(int source_degree) const {
  return blocks_.count(source_degree) > 0;
}

Matrix GradedLinearMap::block(int source_degree) const {
  auto it = blocks_.find(source_degree);
  if (it != blocks_.end()) return it->second;
  return Matrix::Zero(target_.dim(source_degree + degree_),
                      source_.dim(source_degree));
}

void GradedLinearMap::set_block(int source_degree, Matrix m) {
  check_shape(source_degree, m);
  if (m.size() == 0) return;
  blocks_[source_degree] = std::move(m);
}

std::vector<int> GradedLinearMap::block_degrees() const {
  std::vector<int> out;
  for (int deg : source_.degrees())
    if (target_.dim(deg + degree_) > 0) out.push_back(deg);
  return out;
}

GradedLinearMap& GradedLinearMap::operator+=(const GradedLinearMap& other) {
  if (!(source_ == other.source_) || !(target_ == other.target_) ||
      degree_ != other.degree_)
    throw StructuralError("graded map addition requires matching spaces and degree");
  for (const auto& [deg, m] : other.blocks_) {
    auto it = blocks_.find(deg);
    if (it == blocks_.end())
      blocks_[deg] = m;
    else
      it->second += m;
  }
  return *this;
}

GradedLinearMap& GradedLinearMap::operator-=(const GradedLinearMap& other) {
  return *this += other * -1.0;
}

GradedLinearMap& GradedLinearMap::operator*=(double s) {
  for (auto& [deg, m] : blocks_) m *= s;
  return *this;
}

GradedLinearMap compose(const GradedLinearMap& f, const GradedLinearMap& g) {
  if (!(g.target() == f.source()))
    throw StructuralError("composition requires g target to equal f source");
  GradedLinearMap out(g.source(), f.target(), f.degree() + g.degree());
  for (const auto& [deg, gm] : g.blocks()) {
    if (!f.has_block(deg + g.degree())) continue;
    out.set_block(deg, f.block(deg + g.degree()) * gm);
  }
  return out;
}

double norm(const GradedLinearMap& f) {
  double sq = 0.0;
  for (const auto& [deg, m] : f.blocks()) sq += m.squaredNorm();
  return std::sqrt(sq);
}

GradedLinearMap inverse(const GradedLinearMap& f, double cond_limit) {
  if (f.degree() != 0 || !(f.source() == f.target()))
    throw DomainError("inverse requires a degree-0 endomorphism");
  GradedLinearMap out(f.source(), f.target(), 0);
  for (int deg : f.source().degrees()) {
    Matrix m = f.block(deg);
    Eigen::FullPivLU<Matrix> lu(m);
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    if (!lu.isInvertible() || smin <= 0.0 || sv(0) / smin > cond_limit) {
      std::ostringstream msg;
      msg << "block in degree " << deg << " is singular or near-singular";
      throw DomainError(msg.str());
    }
    out.set_block(deg, lu.inverse());
  }
  return out;
}

double max_condition_number(const GradedLinearMap& f) {
  double worst = 1.0;
  for (const auto& [deg, m] : f.blocks()) {
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    if (smin <= 0.0) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, sv(0) / smin);
  }
  return worst;
}

namespace {

// Flattening of the space of degree-d graded maps into one coordinate vector,
// block concatenated in increasing source degree, each block column-major.
struct Indexer {
  std::vector<int> source_degrees;
  std::vector<int> offsets;
  std::vector<std::pair<int, int>> shapes;  // rows, cols per block
  int total = 0;

  Indexer(const GradedVectorSpace& space, int degree) {
    for (int deg : space.degrees()) {
      const int rows = space.dim(deg + degree);
      const int cols = space.dim(deg);
      if (rows == 0 || cols == 0) continue;
      source_degrees.push_back(deg);
      offsets.push_back(total);
      shapes.emplace_back(rows, cols);
      total += rows * cols;
    }
  }

  Vector flatten(const GradedLinearMap& f) const {
    Vector v = Vector::Zero(total);
    for (size_t i = 0; i < source_degrees.size(); ++i) {
      Matrix m = f.block(source_degrees[i]);
      v.segment(offsets[i], m.size()) = Eigen::Map<const Vector>(m.data(), m.size());
    }
    return v;
  }

  GradedLinearMap unflatten(const Vector& v, const GradedVectorSpace& space,
                            int degree) const {
    GradedLinearMap f(space, space, degree);
    for (size_t i = 0; i < source_degrees.size(); ++i) {
      const auto [rows, cols] = shapes[i];
      f.set_block(source_degrees[i],
                  Eigen::Map<const Matrix>(v.data() + offsets[i], rows, cols));
    }
    return f;
  }
};

}  // namespace

struct CochainComplex::Solver {
  Indexer dom;  // degree -2 maps
  Indexer cod;  // degree -1 maps
  Matrix op;    // flattened k -> flattened (dk - kd)
  std::optional<Eigen::CompleteOrthogonalDecomposition<Matrix>> cod_solver;

  Solver(const GradedVectorSpace& space, const GradedLinearMap& d)
      : dom(space, -2), cod(space, -1) {
    op = Matrix::Zero(cod.total, dom.total);
    for (int j = 0; j < dom.total; ++j) {
      Vector e = Vector::Zero(dom.total);
      e(j) = 1.0;
      GradedLinearMap k = dom.unflatten(e, space, -2);
      GradedLinearMap image = compose(d, k) - compose(k, d);
      op.col(j) = cod.flatten(image);
    }
    if (dom.total > 0 && cod.total > 0) cod_solver.emplace(op);
  }
};

CochainComplex::CochainComplex(GradedVectorSpace space, GradedLinearMap d,
                               double tol)
    : space_(std::move(space)), d_(std::move(d)) {
  if (!(d_.source() == space_) || !(d_.target() == space_) || d_.degree() != 1)
    throw StructuralError("differential must be a degree +1 endomorphism of the space");
  GradedLinearMap dd = compose(d_, d_);
  const double dn = norm(d_);
  if (norm(dd) > tol * (1.0 + dn * dn))
    throw StructuralError("differential does not square to zero");
  build_solver();
}

CochainComplex CochainComplex::unchecked(GradedVectorSpace space, GradedLinearMap d) {
  CochainComplex c;
  c.space_ = std::move(space);
  c.d_ = std::move(d);
  c.build_solver();
  return c;
}

void CochainComplex::build_solver() {
  solver_ = std::make_shared<const Solver>(space_, d_);
}

ExactnessResult CochainComplex::solve_exactness(const GradedLinearMap& X,
                                                double tol) const {
  if (X.degree() != -1 || !(X.source() == space_) || !(X.target() == space_))
    throw StructuralError("exactness solve expects a degree -1 endomorphism");
  ExactnessResult out;
  out.witness = GradedLinearMap::zero(space_, space_, -2);
  const Vector x = solver_->cod.flatten(X);
  if (solver_->cod_solver) {
    Vector k = solver_->cod_solver->solve(x);
    out.witness = solver_->dom.unflatten(k, space_, -2);
    out.residual = (solver_->op * k - x).norm();
  } else {
    out.residual = x.norm();
  }
  out.is_exact = out.residual <= tol * (1.0 + x.norm());
  return out;
}

GradedLinearMap graded_commutator_with_differential(const CochainComplex& complex,
                                                    const GradedLinearMap& X) {
  const double sign = (X.degree() % 2 == 0) ? 1.0 : -1.0;
  return compose(complex.differential(), X) - sign * compose(X, complex.differential());
}

}  // namespace holab
