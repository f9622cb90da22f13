#ifndef CONEFP_RICCATI_HPP
#define CONEFP_RICCATI_HPP

#include <optional>

#include "conefp/solver.hpp"

namespace conefp {

/// The map f(X) = A + N^* (B + X^-1)^-1 N on positive definite matrices,
/// whose fixed points solve the discrete algebraic Riccati equation.
///
/// A and B are Hermitian PSD, N is arbitrary complex, and A + N^* N must be
/// positive definite so that f maps the PD cone into itself. The nullspace
/// bases of A and B (and their projectors Q_A, Q_B) are computed once at
/// construction; the object is immutable afterwards.
class RiccatiProblem {
 public:
  RiccatiProblem(CMatrix a, CMatrix b, CMatrix n, std::optional<double> rank_tol = {});
  RiccatiProblem(const Matrix& a, const Matrix& b, const Matrix& n, std::optional<double> rank_tol = {});

  Index dim() const { return a_.rows(); }
  double rank_tol() const { return rank_tol_; }
  const CMatrix& A() const { return a_; }
  const CMatrix& B() const { return b_; }
  const CMatrix& N() const { return n_; }
  const CMatrix& null_basis_A() const { return null_a_; }
  const CMatrix& null_basis_B() const { return null_b_; }
  CMatrix projector_A() const;
  CMatrix projector_B() const;
  Cone cone() const { return Cone::pd(dim()); }

  /// Order-preserving, subhomogeneous, analytic; exact recession maps
  /// attached.
  MapModel model() const;

 private:
  CMatrix a_;
  CMatrix b_;
  CMatrix n_;
  double rank_tol_;
  CMatrix null_a_;
  CMatrix null_b_;
};

/// f(X). (B + X^-1)^-1 is formed as X^1/2 (X^1/2 B X^1/2 + I)^-1 X^1/2 when
/// cond(X) > 1e8.
Element riccati_eval(const RiccatiProblem& p, const Element& x);

/// f_inf(X) = N^* (Q_B X^-1 Q_B)^+ N. May be singular.
Element riccati_recession(const RiccatiProblem& p, const Element& x);

/// (L f L)_inf(X) = (Q_A N^* X^-1 N Q_A)^+. May be singular.
Element riccati_conj_recession(const RiccatiProblem& p, const Element& x);

struct SchurLimit {
  CMatrix inverse;  // (t A + B)^-1
  CMatrix limit;    // (Q_A B Q_A)^+
  double error = 0.0;
};

/// (t A + B)^-1 against its t -> inf limit (Q_A B Q_A)^+, with the spectral
/// norm of the difference. The inverse is formed in the eigenbasis of A so
/// its accuracy does not degrade as t grows.
SchurLimit schur_limit_check(const CMatrix& a, const CMatrix& b, double t, std::optional<double> rank_tol = {});

struct UniquenessCheck {
  bool passes = false;
  double recession_norm = 0.0;  // ||N^* Q_B N||
  double conjugate_norm = 0.0;  // ||(Q_A N^* N Q_A)^+||
};

/// Sufficient condition for a globally attracting fixed point: both norms < 1.
UniquenessCheck sufficient_uniqueness_check(const RiccatiProblem& p);

struct RiccatiSolveOptions {
  IterationConfig iteration;
  int k_max = 200;
  double delta = 1e-6;
  std::optional<Element> start;  // identity when unset
};

/// Proves r(f) < 1 and lambda(f) > 1 by the strict perturbed-power test on
/// both recession maps at u = I, then runs Krasnoselskii iteration (from I
/// unless another start is given).
/// Without both witnesses the result carries an Indeterminate certificate.
SolveReport riccati_certified_solve(const RiccatiProblem& p, const RiccatiSolveOptions& opts = {});

}  // namespace conefp

#endif  // CONEFP_RICCATI_HPP
