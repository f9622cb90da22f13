#include "conefp/riccati.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>

namespace conefp {

namespace {

constexpr double kIllConditioned = 1e8;

void require_psd(const CMatrix& m, const char* name) {
  if (!is_hermitian(m)) throw DomainError(std::string(name) + " is not Hermitian");
  if (!is_psd(m)) throw DomainError(std::string(name) + " is not positive semidefinite");
}

void require_pd_point(const RiccatiProblem& p, const Element& x) {
  if (!(x.cone() == p.cone())) {
    throw DimensionMismatch("Riccati map on " + p.cone().describe() + " applied to a point of " +
                            x.cone().describe());
  }
}

// V S^-1 V^* for an orthonormal basis V and PD (or, failing that, PSD) S.
CMatrix sandwich_inverse(const CMatrix& basis, const CMatrix& inner) {
  CMatrix inv;
  try {
    inv = pd_inverse(inner);
  } catch (const DomainError&) {
    inv = moore_penrose_pinv(symmetrize(inner));
  }
  return symmetrize(basis * inv * basis.adjoint());
}

}  // namespace

RiccatiProblem::RiccatiProblem(CMatrix a, CMatrix b, CMatrix n, std::optional<double> rank_tol)
    : a_(std::move(a)), b_(std::move(b)), n_(std::move(n)) {
  const Index dim = a_.rows();
  if (dim == 0 || a_.cols() != dim || b_.rows() != dim || b_.cols() != dim || n_.rows() != dim ||
      n_.cols() != dim) {
    throw DimensionMismatch("Riccati problem: A, B, N must be square of one common positive size");
  }
  if (!a_.allFinite() || !b_.allFinite() || !n_.allFinite()) {
    throw InvalidArgument("Riccati problem: non-finite entry");
  }
  require_psd(a_, "A");
  require_psd(b_, "B");
  a_ = symmetrize(a_);
  b_ = symmetrize(b_);
  rank_tol_ = rank_tol.value_or(default_rank_tol(dim));
  if (!(rank_tol_ >= 0.0)) throw InvalidArgument("Riccati problem: rank tolerance must be nonnegative");

  const Vector ev = hermitian_eigenvalues(symmetrize(a_ + n_.adjoint() * n_));
  const double top = std::max(ev(dim - 1), 0.0);
  if (!(ev(0) > static_cast<double>(dim) * std::numeric_limits<double>::epsilon() * top) || top == 0.0) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", ev(0));
    throw DomainError(std::string("Riccati problem: A + N^*N is not positive definite (smallest eigenvalue ") +
                      buf + ")");
  }
  null_a_ = nullspace_basis(a_, rank_tol_);
  null_b_ = nullspace_basis(b_, rank_tol_);
}

RiccatiProblem::RiccatiProblem(const Matrix& a, const Matrix& b, const Matrix& n, std::optional<double> rank_tol)
    : RiccatiProblem(CMatrix(a.cast<std::complex<double>>()), CMatrix(b.cast<std::complex<double>>()),
                     CMatrix(n.cast<std::complex<double>>()), rank_tol) {}

CMatrix RiccatiProblem::projector_A() const { return symmetrize(null_a_ * null_a_.adjoint()); }

CMatrix RiccatiProblem::projector_B() const { return symmetrize(null_b_ * null_b_.adjoint()); }

MapModel RiccatiProblem::model() const {
  auto self = std::make_shared<const RiccatiProblem>(*this);
  MapModel m(cone(), [self](const Element& x) { return riccati_eval(*self, x); },
             MapFlags{true, true, false, true});
  m.with_recession([self](const Element& x) { return riccati_recession(*self, x); });
  m.with_conjugate_recession([self](const Element& x) { return riccati_conj_recession(*self, x); });
  return m;
}

Element riccati_eval(const RiccatiProblem& p, const Element& x) {
  require_pd_point(p, x);
  const Index n = p.dim();
  const HermitianEig eig = hermitian_eig(x.mat());
  const double lo = eig.values(0);
  const double hi = eig.values(n - 1);
  if (!(lo > 0.0) || !std::isfinite(hi)) throw DomainError("Riccati map: X is numerically singular");

  CMatrix s;
  if (hi / lo <= kIllConditioned) {
    s = pd_inverse(p.B() + pd_inverse(x.mat()));
  } else {
    const Vector roots = eig.values.cwiseSqrt();
    const CMatrix r = symmetrize(eig.vectors * roots.cast<std::complex<double>>().asDiagonal() *
                                 eig.vectors.adjoint());
    const CMatrix k = symmetrize(r * p.B() * r) + CMatrix::Identity(n, n);
    s = symmetrize(r * pd_inverse(k) * r);
  }
  return Element::hermitian(symmetrize(p.A() + p.N().adjoint() * s * p.N()));
}

Element riccati_recession(const RiccatiProblem& p, const Element& x) {
  require_pd_point(p, x);
  const CMatrix& v = p.null_basis_B();
  if (v.cols() == 0) return Element::zero(p.cone());
  const CMatrix inner = symmetrize(v.adjoint() * pd_inverse(x.mat()) * v);
  const CMatrix mid = sandwich_inverse(v, inner);
  return Element::hermitian(symmetrize(p.N().adjoint() * mid * p.N()));
}

Element riccati_conj_recession(const RiccatiProblem& p, const Element& x) {
  require_pd_point(p, x);
  const CMatrix& v = p.null_basis_A();
  if (v.cols() == 0) return Element::zero(p.cone());
  const CMatrix nv = p.N() * v;
  const CMatrix inner = symmetrize(nv.adjoint() * pd_inverse(x.mat()) * nv);
  return Element::hermitian(sandwich_inverse(v, inner));
}

SchurLimit schur_limit_check(const CMatrix& a, const CMatrix& b, double t, std::optional<double> rank_tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw DimensionMismatch("schur_limit_check: A and B must be square of equal size");
  }
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("schur_limit_check: t must be positive");
  require_psd(a, "A");
  require_psd(b, "B");
  const Index n = a.rows();

  // Work in the eigenbasis of A with its numerically-zero eigenvalues
  // truncated; the same basis gives Q_A.
  const HermitianEig eig = hermitian_eig(symmetrize(a));
  const double top = n > 0 ? std::max(eig.values(n - 1), 0.0) : 0.0;
  const double cut = rank_tol.value_or(default_rank_tol(n)) * top;
  Vector vals = eig.values;
  Index null_count = 0;
  for (Index i = 0; i < n; ++i) {
    if (vals(i) <= cut) {
      vals(i) = 0.0;
      ++null_count;
    }
  }
  const CMatrix& u = eig.vectors;
  const CMatrix c = symmetrize(u.adjoint() * symmetrize(b) * u);
  CMatrix m = c;
  for (Index i = 0; i < n; ++i) m(i, i) += t * vals(i);

  SchurLimit out;
  try {
    out.inverse = symmetrize(u * pd_inverse(m) * u.adjoint());
  } catch (const DomainError&) {
    throw DomainError("schur_limit_check: tA + B is singular");
  }
  if (null_count == 0) {
    out.limit = CMatrix::Zero(n, n);
  } else {
    const CMatrix v = u.leftCols(null_count);
    out.limit = symmetrize(v * pd_inverse(c.topLeftCorner(null_count, null_count)) * v.adjoint());
  }
  out.error = spectral_norm(symmetrize(out.inverse - out.limit));
  return out;
}

UniquenessCheck sufficient_uniqueness_check(const RiccatiProblem& p) {
  UniquenessCheck out;
  const CMatrix bn = p.null_basis_B().adjoint() * p.N();
  out.recession_norm = p.null_basis_B().cols() == 0 ? 0.0 : spectral_norm(symmetrize(bn.adjoint() * bn));

  if (p.null_basis_A().cols() == 0) {
    out.conjugate_norm = 0.0;
  } else {
    const CMatrix nv = p.N() * p.null_basis_A();
    const double lo = hermitian_eigenvalues(symmetrize(nv.adjoint() * nv))(0);
    out.conjugate_norm = lo > 0.0 ? 1.0 / lo : std::numeric_limits<double>::infinity();
  }
  out.passes = out.recession_norm < 1.0 && out.conjugate_norm < 1.0;
  return out;
}

SolveReport riccati_certified_solve(const RiccatiProblem& p, const RiccatiSolveOptions& opts) {
  const MapModel f = p.model();
  const Element unit = Element::unit(p.cone());

  Certificate cert;
  cert.delta = opts.delta;
  const ContractionTest kt = strict_contraction_test(*f.recession_map(), unit, opts.k_max, opts.delta);
  const ContractionTest lt = strict_contraction_test(*f.conjugate_recession_map(), unit, opts.k_max, opts.delta);
  cert.k_witness = kt.proven_at;
  cert.l_witness = lt.proven_at;
  if (kt.proven() && lt.proven()) {
    cert.kind = Certificate::Kind::CWBounds;
    cert.upper_cw = kt.bound;
    cert.lower_cw = lt.bound > 0.0 ? 1.0 / lt.bound : std::numeric_limits<double>::infinity();
  }

  SolveReport rep = krasnoselskii_solve(f, ConePoint(opts.start.value_or(unit)), opts.iteration);
  rep.certificate = std::move(cert);
  return rep;
}

}  // namespace conefp
