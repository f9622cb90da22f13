#ifndef CONEFP_TESTS_SUPPORT_HPP
#define CONEFP_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Eigenvalues>

#include "conefp/riccati.hpp"

namespace conefp::testing {

using cplx = std::complex<double>;

inline const double kGolden = (1.0 + std::sqrt(5.0)) / 2.0;

// A = B = N = [1]; fixed point is the golden ratio.
inline RiccatiProblem golden_problem() {
  const Matrix one = Matrix::Ones(1, 1);
  return RiccatiProblem(one, one, one);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

  Vector positive_vector(Index n, double lo = 0.1, double hi = 10.0) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = std::exp(uniform(std::log(lo), std::log(hi)));
    return v;
  }

  CMatrix gaussian(Index rows, Index cols, bool complex) {
    CMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) m(i, j) = cplx(normal(), complex ? normal() : 0.0);
    return m;
  }

  // G G^* with G of the requested column count; rank deficient when rank < n.
  CMatrix psd(Index n, Index rank, bool complex, double scale = 1.0) {
    if (rank == 0) return CMatrix::Zero(n, n);
    const CMatrix g = gaussian(n, rank, complex);
    return symmetrize(g * g.adjoint() * (scale / static_cast<double>(n)));
  }

  // Random PD matrix with eigenvalues log-uniform in [lo, hi].
  CMatrix pd(Index n, bool complex, double lo = 0.2, double hi = 5.0) {
    const CMatrix q = gaussian(n, n, complex).householderQr().householderQ();
    Vector ev(n);
    for (Index i = 0; i < n; ++i) ev(i) = std::exp(uniform(std::log(lo), std::log(hi)));
    return symmetrize(q * ev.cast<cplx>().asDiagonal() * q.adjoint());
  }

  // PSD of the given rank, nonzero eigenvalues log-uniform in [lo, hi].
  CMatrix psd_spectrum(Index n, Index rank, bool complex, double lo = 0.5, double hi = 2.0) {
    const CMatrix q = gaussian(n, n, complex).householderQr().householderQ();
    Vector ev = Vector::Zero(n);
    for (Index i = 0; i < rank; ++i) ev(i) = std::exp(uniform(std::log(lo), std::log(hi)));
    return symmetrize(q * ev.cast<cplx>().asDiagonal() * q.adjoint());
  }

  Element pd_point(Index n, bool complex, double lo = 0.2, double hi = 5.0) {
    return Element::hermitian(pd(n, complex, lo, hi));
  }

  // Random Riccati problem; A and B get random rank so both nullspaces occur.
  RiccatiProblem riccati(Index n, bool complex) {
    for (;;) {
      const CMatrix a = psd(n, integer(0, static_cast<int>(n)), complex);
      const CMatrix b = psd(n, integer(0, static_cast<int>(n)), complex);
      const CMatrix nn = gaussian(n, n, complex) * 0.7;
      try {
        return RiccatiProblem(a, b, nn);
      } catch (const DomainError&) {
      }
    }
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

// Generalized eigenvalues of X v = lambda Y v, ascending. Independent of the
// library's whitening path.
inline Vector generalized_eigenvalues(const CMatrix& x, const CMatrix& y) {
  if (x.imag().isZero(0.0) && y.imag().isZero(0.0)) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(x.real(), y.real(), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }
  // Realify: a Hermitian pencil doubles into a real symmetric one.
  const Index n = x.rows();
  auto realify = [n](const CMatrix& m) {
    Matrix r(2 * n, 2 * n);
    r << m.real(), -m.imag(), m.imag(), m.real();
    return r;
  };
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(realify(x), realify(y), Eigen::EigenvaluesOnly);
  Vector all = es.eigenvalues();
  Vector out(n);
  for (Index i = 0; i < n; ++i) out(i) = all(2 * i);
  return out;
}

// Spectral radius via the general (non-symmetric) eigensolver.
inline double spectral_radius(const Matrix& m) {
  Eigen::EigenSolver<Matrix> es(m, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

inline double loewner_min(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// Random entrywise nonnegative irreducible matrix: a cyclic permutation
// pattern guarantees strong connectivity, then random extra entries.
inline Matrix random_irreducible(Rng& rng, Index n, double density = 0.4) {
  Matrix m = Matrix::Zero(n, n);
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::shuffle(order.begin(), order.end(), rng.engine());
  for (Index i = 0; i < n; ++i) {
    m(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>((i + 1) % n)]) = rng.uniform(0.1, 2.0);
  }
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (m(i, j) == 0.0 && rng.uniform(0.0, 1.0) < density) m(i, j) = rng.uniform(0.0, 2.0);
  return m;
}

}  // namespace conefp::testing

#endif  // CONEFP_TESTS_SUPPORT_HPP
