#ifndef CONEFP_CONE_HPP
#define CONEFP_CONE_HPP

#include <complex>
#include <cstddef>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "conefp/errors.hpp"

namespace conefp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

enum class ConeKind { Orthant, PositiveDefinite };

/// Descriptor of one of the two shipped cones: the nonnegative orthant of
/// R^n, or the cone of n x n positive semidefinite Hermitian matrices.
struct Cone {
  ConeKind kind = ConeKind::Orthant;
  Index dim = 0;

  static Cone orthant(Index n) { return {ConeKind::Orthant, n}; }
  static Cone pd(Index n) { return {ConeKind::PositiveDefinite, n}; }

  bool operator==(const Cone&) const = default;
  std::string describe() const;
};

/// An element of the ambient space of a cone: a real n-vector for the
/// orthant, an n x n Hermitian matrix for the PD cone. Hermitian storage is
/// always exactly symmetrized, and arithmetic re-symmetrizes its result.
class Element {
 public:
  Element() = default;

  static Element vector(Vector v);
  /// Validates Hermitian symmetry to 1e-12 relative, then symmetrizes.
  static Element hermitian(const CMatrix& m);
  static Element hermitian(const Matrix& m);
  /// All-ones vector (orthant) or identity (PD): the default order unit.
  static Element unit(const Cone& cone);
  static Element zero(const Cone& cone);

  const Cone& cone() const { return cone_; }
  Index dim() const { return cone_.dim; }
  bool is_orthant() const { return cone_.kind == ConeKind::Orthant; }
  const Vector& vec() const { return vec_; }
  const CMatrix& mat() const { return mat_; }

  bool is_finite() const;
  /// True when every imaginary part is exactly zero (always true on the
  /// orthant).
  bool is_real() const;

  Element operator+(const Element& rhs) const;
  Element operator-(const Element& rhs) const;
  Element operator*(double s) const;
  friend Element operator*(double s, const Element& e) { return e * s; }

  /// Component-wise (orthant) or matrix-inverse (PD) reciprocal. This is the
  /// order-reversing Thompson isometry of both cones.
  Element inverse() const;

 private:
  Cone cone_;
  Vector vec_;
  CMatrix mat_;
};

/// An element known to lie in the interior of its cone. Construction
/// validates strict positivity (orthant) or positive definiteness (PD).
class ConePoint {
 public:
  explicit ConePoint(Element e);

  const Element& element() const { return e_; }
  operator const Element&() const { return e_; }
  const Cone& cone() const { return e_.cone(); }

 private:
  Element e_;
};

/// A functional phi in the dual cone attaining the sup in
/// M(x/y) = sup phi(x)/phi(y): a coordinate functional on the orthant, or
/// Z -> v^* Z v on the PD cone.
struct DualWitness {
  enum class Kind { CoordinateIndex, RankOneProjector };
  Kind kind = Kind::CoordinateIndex;
  Index index = 0;
  CVector direction;  // unit-norm v for RankOneProjector
  double value = 0.0;

  double apply(const Element& z) const;
};

// ---------------------------------------------------------------------------
// Hermitian matrix utilities
// ---------------------------------------------------------------------------

struct HermitianEig {
  Vector values;    // ascending
  CMatrix vectors;  // columns, orthonormal
};

/// Eigen-decomposition of a Hermitian matrix. Uses a real symmetric solver
/// when every imaginary part is zero.
HermitianEig hermitian_eig(const CMatrix& h, bool compute_vectors = true);
Vector hermitian_eigenvalues(const CMatrix& h);

CMatrix symmetrize(const CMatrix& m);
bool is_hermitian(const CMatrix& m, double rel_tol = 1e-12);
/// Numerical PSD test: Hermitian and every eigenvalue >= -n*eps*lambda_max.
bool is_psd(const CMatrix& m);

double spectral_norm(const CMatrix& m);
/// Default relative rank tolerance n * machine epsilon.
double default_rank_tol(Index n);

/// Spectral Moore-Penrose pseudoinverse of a Hermitian matrix. Eigenvalues
/// with |lambda| <= rank_tol * max|lambda| are treated as zero.
CMatrix moore_penrose_pinv(const CMatrix& m, std::optional<double> rank_tol = {});

/// Orthonormal basis (as columns) of the numerical nullspace of a PSD matrix:
/// eigenvectors whose eigenvalue is <= rank_tol * lambda_max.
CMatrix nullspace_basis(const CMatrix& a, std::optional<double> rank_tol = {});
/// Orthogonal projector onto the numerical nullspace of a PSD matrix.
CMatrix nullspace_projector(const CMatrix& a, std::optional<double> rank_tol = {});

/// Inverse of a positive definite matrix via Cholesky; throws DomainError
/// when the factorization fails.
CMatrix pd_inverse(const CMatrix& m);
/// Principal square root of a PSD matrix.
CMatrix psd_sqrt(const CMatrix& m);

// ---------------------------------------------------------------------------
// Cone geometry
// ---------------------------------------------------------------------------

/// Smallest entry (orthant) or smallest eigenvalue (PD).
double interior_margin(const Element& x);
/// Largest entry magnitude (orthant) or spectral norm (PD).
double magnitude(const Element& x);
bool in_interior(const Element& x, double margin = 0.0);

/// M(x/y) = inf{beta > 0 : x <= beta y}; x in the closed cone, y interior.
double max_ratio(const Element& x, const Element& y);
/// m(x/y) = sup{alpha > 0 : alpha y <= x}.
double min_ratio(const Element& x, const Element& y);
/// Both ratios from a single factorization: {m(x/y), M(x/y)}.
std::pair<double, double> ratio_bounds(const Element& x, const Element& y);

/// Thompson's metric log max{M(x/y), M(y/x)}.
double thompson_distance(const Element& x, const Element& y);

/// ||v||_u = inf{k > 0 : -k u <= v <= k u}.
double order_unit_norm(const Element& v, const Element& u);

/// Certified x << y: m(y/x) >= 1 + delta.
bool strict_dominance(const Element& x, const Element& y, double delta = 1e-8);

DualWitness witness_functional(const Element& x, const Element& y);

/// Smallest entry / eigenvalue of y - x; nonnegative iff x <= y.
double order_gap(const Element& x, const Element& y);

}  // namespace conefp

#endif  // CONEFP_CONE_HPP
