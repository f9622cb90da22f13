#include "conefp/cone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace conefp {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_same_cone(const Element& a, const Element& b, const char* op) {
  if (!(a.cone() == b.cone())) {
    std::ostringstream os;
    os << op << ": cone mismatch (" << a.cone().describe() << " vs "
       << b.cone().describe() << ")";
    throw DimensionMismatch(os.str());
  }
}

bool is_real_matrix(const CMatrix& m) { return m.imag().isZero(0.0); }

// Whitened matrix L^{-1} X L^{-*} for Y = L L^*, together with the Cholesky
// factor so witnesses can be pulled back.
template <typename Mat>
struct Whitening {
  Mat whitened;
  Eigen::LLT<Mat> llt;
};

template <typename Mat>
Whitening<Mat> whiten(const Mat& x, const Mat& y) {
  Whitening<Mat> w{Mat(), Eigen::LLT<Mat>(y)};
  if (w.llt.info() != Eigen::Success || !y.allFinite()) {
    throw DomainError("reference matrix is not positive definite");
  }
  const auto lower = w.llt.matrixL();
  Mat t = lower.solve(x);
  Mat s = lower.solve(t.adjoint());
  w.whitened = (s + s.adjoint()) * 0.5;
  return w;
}

// Eigenvalues (ascending) of Y^{-1/2} X Y^{-1/2}, x any Hermitian.
Vector whitened_eigenvalues(const Element& x, const Element& y) {
  if (is_real_matrix(x.mat()) && is_real_matrix(y.mat())) {
    Matrix xr = x.mat().real();
    Matrix yr = y.mat().real();
    auto w = whiten(xr, yr);
    Eigen::SelfAdjointEigenSolver<Matrix> es(w.whitened, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }
  auto w = whiten(x.mat(), y.mat());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(w.whitened, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

// {smallest, largest} generalized ratio without clamping.
std::pair<double, double> raw_ratio_bounds(const Element& x, const Element& y) {
  if (y.is_orthant()) {
    if (!(y.vec().array() > 0.0).all()) {
      throw DomainError("reference point is not in the orthant interior");
    }
    const Vector r = x.vec().cwiseQuotient(y.vec());
    return {r.minCoeff(), r.maxCoeff()};
  }
  const Vector ev = whitened_eigenvalues(x, y);
  return {ev(0), ev(ev.size() - 1)};
}

}  // namespace

std::string Cone::describe() const {
  std::ostringstream os;
  os << (kind == ConeKind::Orthant ? "orthant(" : "pd(") << dim << ")";
  return os.str();
}

// ---------------------------------------------------------------------------
// Element
// ---------------------------------------------------------------------------

Element Element::vector(Vector v) {
  Element e;
  e.cone_ = Cone::orthant(v.size());
  e.vec_ = std::move(v);
  return e;
}

Element Element::hermitian(const CMatrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch("Hermitian matrix must be square");
  }
  if (!is_hermitian(m)) {
    throw DomainError("matrix is not Hermitian within 1e-12 relative tolerance");
  }
  Element e;
  e.cone_ = Cone::pd(m.rows());
  e.mat_ = symmetrize(m);
  return e;
}

Element Element::hermitian(const Matrix& m) { return hermitian(CMatrix(m.cast<std::complex<double>>())); }

Element Element::unit(const Cone& cone) {
  if (cone.kind == ConeKind::Orthant) return vector(Vector::Ones(cone.dim));
  return hermitian(CMatrix(CMatrix::Identity(cone.dim, cone.dim)));
}

Element Element::zero(const Cone& cone) {
  if (cone.kind == ConeKind::Orthant) return vector(Vector::Zero(cone.dim));
  return hermitian(CMatrix(CMatrix::Zero(cone.dim, cone.dim)));
}

bool Element::is_finite() const { return is_orthant() ? vec_.allFinite() : mat_.allFinite(); }

bool Element::is_real() const { return is_orthant() || is_real_matrix(mat_); }

Element Element::operator+(const Element& rhs) const {
  require_same_cone(*this, rhs, "add");
  Element e = *this;
  if (is_orthant()) {
    e.vec_ += rhs.vec_;
  } else {
    e.mat_ = symmetrize(mat_ + rhs.mat_);
  }
  return e;
}

Element Element::operator-(const Element& rhs) const {
  require_same_cone(*this, rhs, "subtract");
  Element e = *this;
  if (is_orthant()) {
    e.vec_ -= rhs.vec_;
  } else {
    e.mat_ = symmetrize(mat_ - rhs.mat_);
  }
  return e;
}

Element Element::operator*(double s) const {
  Element e = *this;
  if (is_orthant()) {
    e.vec_ *= s;
  } else {
    e.mat_ *= s;
  }
  return e;
}

Element Element::inverse() const {
  if (is_orthant()) {
    if (!(vec_.array() > 0.0).all()) {
      throw DomainError("reciprocal of a non-interior orthant point");
    }
    return vector(vec_.cwiseInverse());
  }
  Element e;
  e.cone_ = cone_;
  e.mat_ = pd_inverse(mat_);
  return e;
}

ConePoint::ConePoint(Element e) : e_(std::move(e)) {
  if (!e_.is_finite() || !in_interior(e_, 0.0)) {
    throw DomainError("point is not in the interior of " + e_.cone().describe());
  }
}

double DualWitness::apply(const Element& z) const {
  if (kind == Kind::CoordinateIndex) return z.vec()(index);
  return (direction.adjoint() * z.mat() * direction)(0, 0).real();
}

// ---------------------------------------------------------------------------
// Hermitian utilities
// ---------------------------------------------------------------------------

CMatrix symmetrize(const CMatrix& m) { return (m + m.adjoint()) * 0.5; }

bool is_hermitian(const CMatrix& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  if (m.size() == 0) return true;
  const double scale = m.cwiseAbs().maxCoeff();
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

HermitianEig hermitian_eig(const CMatrix& h, bool compute_vectors) {
  if (!is_hermitian(h)) throw DomainError("eigendecomposition of a non-Hermitian matrix");
  const int options = compute_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly;
  HermitianEig out;
  if (is_real_matrix(h)) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(h.real()), options);
    out.values = es.eigenvalues();
    if (compute_vectors) out.vectors = es.eigenvectors().cast<std::complex<double>>();
  } else {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(symmetrize(h), options);
    out.values = es.eigenvalues();
    if (compute_vectors) out.vectors = es.eigenvectors();
  }
  return out;
}

Vector hermitian_eigenvalues(const CMatrix& h) { return hermitian_eig(h, false).values; }

bool is_psd(const CMatrix& m) {
  if (!is_hermitian(m)) return false;
  if (m.size() == 0) return true;
  const Vector ev = hermitian_eigenvalues(m);
  const double top = std::max(ev.cwiseAbs().maxCoeff(), 0.0);
  return ev(0) >= -static_cast<double>(m.rows()) * kEps * top;
}

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  if (is_hermitian(m)) return hermitian_eigenvalues(m).cwiseAbs().maxCoeff();
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

double default_rank_tol(Index n) { return static_cast<double>(n) * kEps; }

CMatrix moore_penrose_pinv(const CMatrix& m, std::optional<double> rank_tol) {
  if (!is_hermitian(m)) throw DomainError("pseudoinverse requires a Hermitian matrix");
  const Index n = m.rows();
  CMatrix out = CMatrix::Zero(n, n);
  if (n == 0) return out;
  const HermitianEig eig = hermitian_eig(m);
  const double top = eig.values.cwiseAbs().maxCoeff();
  const double cut = rank_tol.value_or(default_rank_tol(n)) * top;
  for (Index i = 0; i < n; ++i) {
    const double lambda = eig.values(i);
    if (std::abs(lambda) <= cut) continue;
    const CVector v = eig.vectors.col(i);
    out += (1.0 / lambda) * (v * v.adjoint());
  }
  return symmetrize(out);
}

CMatrix nullspace_basis(const CMatrix& a, std::optional<double> rank_tol) {
  if (!is_hermitian(a)) throw DomainError("nullspace of a non-Hermitian matrix");
  const Index n = a.rows();
  if (n == 0) return CMatrix(0, 0);
  const HermitianEig eig = hermitian_eig(a);
  const double top = std::max(eig.values(n - 1), 0.0);
  const double cut = rank_tol.value_or(default_rank_tol(n)) * top;
  Index count = 0;
  while (count < n && eig.values(count) <= cut) ++count;
  return eig.vectors.leftCols(count);
}

CMatrix nullspace_projector(const CMatrix& a, std::optional<double> rank_tol) {
  const CMatrix basis = nullspace_basis(a, rank_tol);
  return symmetrize(basis * basis.adjoint());
}

CMatrix pd_inverse(const CMatrix& m) {
  const Index n = m.rows();
  if (is_real_matrix(m)) {
    Eigen::LLT<Matrix> llt(m.real());
    if (llt.info() != Eigen::Success || !m.allFinite()) {
      throw DomainError("matrix is not positive definite");
    }
    Matrix inv = llt.solve(Matrix::Identity(n, n));
    return symmetrize(inv.cast<std::complex<double>>());
  }
  Eigen::LLT<CMatrix> llt(m);
  if (llt.info() != Eigen::Success || !m.allFinite()) {
    throw DomainError("matrix is not positive definite");
  }
  return symmetrize(llt.solve(CMatrix::Identity(n, n)));
}

CMatrix psd_sqrt(const CMatrix& m) {
  const HermitianEig eig = hermitian_eig(m);
  const Vector roots = eig.values.cwiseMax(0.0).cwiseSqrt();
  return symmetrize(eig.vectors * roots.cast<std::complex<double>>().asDiagonal() *
                    eig.vectors.adjoint());
}

// ---------------------------------------------------------------------------
// Cone geometry
// ---------------------------------------------------------------------------

double interior_margin(const Element& x) {
  if (x.is_orthant()) return x.dim() == 0 ? 0.0 : x.vec().minCoeff();
  if (!x.mat().allFinite()) return std::numeric_limits<double>::quiet_NaN();
  return hermitian_eigenvalues(x.mat())(0);
}

double magnitude(const Element& x) {
  if (x.is_orthant()) return x.vec().cwiseAbs().maxCoeff();
  if (!x.mat().allFinite()) return std::numeric_limits<double>::infinity();
  return spectral_norm(x.mat());
}

bool in_interior(const Element& x, double margin) {
  if (x.dim() == 0) return false;
  const double m = interior_margin(x);
  return m > margin;  // false on NaN
}

std::pair<double, double> ratio_bounds(const Element& x, const Element& y) {
  require_same_cone(x, y, "ratio");
  auto [lo, hi] = raw_ratio_bounds(x, y);
  return {std::max(lo, 0.0), std::max(hi, 0.0)};
}

double max_ratio(const Element& x, const Element& y) { return ratio_bounds(x, y).second; }

double min_ratio(const Element& x, const Element& y) { return ratio_bounds(x, y).first; }

double thompson_distance(const Element& x, const Element& y) {
  require_same_cone(x, y, "thompson_distance");
  if (!in_interior(x)) throw DomainError("thompson_distance: first point is not interior");
  auto [lo, hi] = raw_ratio_bounds(x, y);
  if (!(lo > 0.0)) throw DomainError("thompson_distance: first point is not interior");
  return std::max({std::log(hi), -std::log(lo), 0.0});
}

double order_unit_norm(const Element& v, const Element& u) {
  require_same_cone(v, u, "order_unit_norm");
  auto [lo, hi] = raw_ratio_bounds(v, u);
  return std::max(std::abs(lo), std::abs(hi));
}

bool strict_dominance(const Element& x, const Element& y, double delta) {
  if (!(delta > 0.0)) throw InvalidArgument("strict_dominance: delta must be positive");
  return min_ratio(y, x) >= 1.0 + delta;
}

DualWitness witness_functional(const Element& x, const Element& y) {
  require_same_cone(x, y, "witness_functional");
  DualWitness w;
  if (y.is_orthant()) {
    if (!(y.vec().array() > 0.0).all()) {
      throw DomainError("reference point is not in the orthant interior");
    }
    const Vector r = x.vec().cwiseQuotient(y.vec());
    Index best = 0;
    for (Index i = 1; i < r.size(); ++i) {
      if (r(i) > r(best)) best = i;
    }
    w.kind = DualWitness::Kind::CoordinateIndex;
    w.index = best;
    w.value = w.apply(x) / w.apply(y);
    return w;
  }

  auto wh = whiten(x.mat(), y.mat());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(wh.whitened);
  const Vector& ev = es.eigenvalues();
  const Index n = ev.size();
  const double top = ev(n - 1);
  const double tie = 1e-12 * std::max(std::abs(top), 1.0);
  Index pick = n - 1;
  for (Index i = 0; i < n; ++i) {
    if (ev(i) >= top - tie) {
      pick = i;
      break;
    }
  }
  // phi(Z) = v^* Z v with v = L^{-*} w gives phi(X)/phi(Y) = w^* W w.
  CVector v = wh.llt.matrixU().solve(CVector(es.eigenvectors().col(pick)));
  v.normalize();
  w.kind = DualWitness::Kind::RankOneProjector;
  w.direction = v;
  w.value = w.apply(x) / w.apply(y);
  return w;
}

double order_gap(const Element& x, const Element& y) {
  require_same_cone(x, y, "order_gap");
  return interior_margin(y - x);
}

}  // namespace conefp
