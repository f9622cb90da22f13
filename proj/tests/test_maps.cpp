#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace conefp;
using namespace conefp::testing;

namespace {

Vector v2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Matrix half_swap() {
  Matrix m(2, 2);
  m << 0, 0.5, 0.5, 0;
  return m;
}

AffineOrthantMap random_affine(Rng& rng, Index n) {
  Matrix m = random_irreducible(rng, n);
  Vector b(n);
  for (Index i = 0; i < n; ++i) b(i) = rng.uniform(0.0, 1.0) < 0.3 ? 0.0 : rng.uniform(0.0, 3.0);
  return AffineOrthantMap(m, b);
}

}  // namespace

TEST_CASE("affine evaluation") {
  const AffineOrthantMap f(half_swap(), v2(1, 1));
  CHECK(eval_affine(f, v2(2, 2)) == v2(2, 2));
  CHECK(eval_affine(f, v2(1, 1)) == v2(1.5, 1.5));
  const AffineOrthantMap id(Matrix::Identity(3, 3), Vector::Zero(3));
  Vector x(3);
  x << 0.3, 4, 1e-5;
  CHECK(eval_affine(id, x) == x);

  // Oracle: the fixed point solves (I - M) x = b.
  const Vector fixed = (Matrix::Identity(2, 2) - half_swap()).partialPivLu().solve(v2(1, 1));
  CHECK((eval_affine(f, fixed) - fixed).norm() < 1e-14);
  CHECK((fixed - v2(2, 2)).norm() < 1e-14);
}

TEST_CASE("affine construction validates its invariants") {
  Matrix neg = half_swap();
  neg(0, 1) = -0.1;
  CHECK_THROWS_AS(AffineOrthantMap(neg, v2(1, 1)), InvalidArgument);
  CHECK_THROWS_AS(AffineOrthantMap(half_swap(), v2(-1, 1)), InvalidArgument);
  Matrix zero_row = half_swap();
  zero_row(0, 1) = 0.0;
  CHECK_THROWS_AS(AffineOrthantMap(zero_row, v2(0, 1)), InvalidArgument);
  CHECK_NOTHROW(AffineOrthantMap(zero_row, v2(1, 0)));
  CHECK_THROWS_AS(AffineOrthantMap(Matrix::Identity(3, 3), v2(1, 1)), DimensionMismatch);
  CHECK_THROWS_AS(eval_affine(AffineOrthantMap(half_swap(), v2(1, 1)), Vector::Ones(3)), DimensionMismatch);
}

TEST_CASE("permutation affine evaluation") {
  const std::vector<Index> swap{1, 0};
  CHECK(eval_perm_affine(swap, Vector::Zero(2), v2(1, 2)) == v2(2, 1));
  CHECK(eval_perm_affine({0, 1}, Vector::Zero(2), v2(1, 2)) == v2(1, 2));
  CHECK(eval_perm_affine(swap, v2(1, 1), v2(1, 2)) == v2(3, 2));
  CHECK_THROWS_AS(PermutationAffineMap({0, 0}, Vector::Zero(2)), InvalidArgument);
  CHECK_THROWS_AS(PermutationAffineMap({0, 2}, Vector::Zero(2)), InvalidArgument);
  CHECK_THROWS_AS(PermutationAffineMap({1, 0}, Vector::Zero(3)), InvalidArgument);
}

TEST_CASE("map model flags and cone checks") {
  const MapModel f = AffineOrthantMap(half_swap(), v2(1, 1)).model();
  CHECK(f.flags().order_preserving);
  CHECK(f.flags().subhomogeneous);
  CHECK_FALSE(f.flags().homogeneous);
  CHECK(AffineOrthantMap(half_swap(), Vector::Zero(2)).model().flags().homogeneous);
  CHECK_THROWS_AS(f(Element::unit(Cone::orthant(3))), DimensionMismatch);
  CHECK_THROWS_AS(f(Element::unit(Cone::pd(2))), DimensionMismatch);
  CHECK(f.recession_map().has_value());
  CHECK(f.conjugate_recession_map().has_value());
}

TEST_CASE("affine maps are order-preserving and subhomogeneous") {
  Rng rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = rng.integer(1, 8);
    const AffineOrthantMap f = random_affine(rng, n);
    const Vector x = rng.positive_vector(n);
    Vector y = x;
    for (Index i = 0; i < n; ++i) y(i) += rng.uniform(0.0, 2.0);
    const Vector fx = f(x);
    const Vector fy = f(y);
    CHECK((fy - fx).minCoeff() >= -1e-12 * fy.cwiseAbs().maxCoeff());
    const double t = std::exp(rng.uniform(0.0, 4.0));
    const Vector ftx = f(t * x);
    CHECK((t * fx - ftx).minCoeff() >= -1e-12 * ftx.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("shipped maps are Thompson nonexpansive") {
  Rng rng(111);
  for (int trial = 0; trial < 300; ++trial) {
    const Index n = rng.integer(1, 8);
    MapModel f = trial % 3 == 0 ? linear_map(random_irreducible(rng, n)) : random_affine(rng, n).model();
    if (trial % 5 == 0) {
      std::vector<Index> perm(static_cast<std::size_t>(n));
      for (Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
      std::shuffle(perm.begin(), perm.end(), rng.engine());
      Vector b(n);
      for (Index i = 0; i < n; ++i) b(i) = rng.uniform(0.0, 2.0);
      f = PermutationAffineMap(perm, b).model();
    }
    const Element x = Element::vector(rng.positive_vector(n));
    const Element y = Element::vector(rng.positive_vector(n));
    CHECK(thompson_distance(f(x), f(y)) <= thompson_distance(x, y) + 1e-9);
  }
}

TEST_CASE("recession estimate examples") {
  const MapModel f = AffineOrthantMap(half_swap(), v2(1, 1)).model();
  const RecessionEstimate est = recession_estimate(f, Element::unit(Cone::orthant(2)));
  CHECK(est.converged);
  CHECK((est.value.vec() - v2(0.5, 0.5)).cwiseAbs().maxCoeff() <= 2e-9);
  CHECK_FALSE(est.on_boundary);

  const MapModel lin = linear_map(half_swap());
  const RecessionEstimate hom = recession_estimate(lin, Element::vector(v2(1, 3)));
  CHECK(hom.converged);
  CHECK(hom.evaluations == 1);
  CHECK(hom.value.vec() == v2(1.5, 0.5));

  const MapModel ric = golden_problem().model();
  const RecessionEstimate scalar = recession_estimate(ric, Element::unit(Cone::pd(1)));
  CHECK(scalar.converged);
  CHECK(std::abs(scalar.value.mat()(0, 0)) < 1e-9);
  CHECK(scalar.on_boundary);

  CHECK_THROWS_AS(recession_estimate(f, Element::unit(Cone::orthant(2)), {}), InvalidArgument);
}

TEST_CASE("recession trace is monotone and matches the exact recession") {
  Rng rng(121);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = rng.integer(1, 8);
    const AffineOrthantMap f = random_affine(rng, n);
    const MapModel model = f.model();
    const Element x = Element::vector(rng.positive_vector(n));
    const RecessionEstimate est = recession_estimate(model, x);
    CHECK(est.converged);
    for (std::size_t k = 1; k < est.trace.size(); ++k) {
      const Vector drop = est.trace[k - 1].vec() - est.trace[k].vec();
      CHECK(drop.minCoeff() >= -1e-12 * est.trace[k - 1].vec().maxCoeff());
    }
    const Vector exact = f.recession(x.vec());
    CHECK(order_unit_norm(Element::vector(est.value.vec() - exact), x) <= 1e-9);
  }
}

TEST_CASE("conjugate recession of an affine map") {
  // L f L with L the reciprocal; hand-computed for b > 0: (LfL)_inf = 0.
  const AffineOrthantMap f(half_swap(), v2(1, 1));
  CHECK(f.conjugate_recession(v2(3, 7)).isZero(0.0));
  // b = 0: (LfL)(x) = 1 / (M x^-1), homogeneous.
  const AffineOrthantMap g(half_swap(), Vector::Zero(2));
  const Vector x = v2(3, 7);
  const Vector expect = (half_swap() * x.cwiseInverse()).cwiseInverse();
  CHECK(g.conjugate_recession(x).isApprox(expect, 1e-15));

  // Numeric route through recession_estimate of the conjugated model agrees.
  Rng rng(131);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = rng.integer(1, 6);
    const AffineOrthantMap h = random_affine(rng, n);
    const Element y = Element::vector(rng.positive_vector(n));
    const RecessionEstimate est = recession_estimate(h.model().conjugate(), y);
    REQUIRE(est.converged);
    CHECK(order_unit_norm(Element::vector(est.value.vec() - h.conjugate_recession(y.vec())), y) <= 1e-6);
  }
}

TEST_CASE("relaxed and scaled models") {
  const MapModel f = AffineOrthantMap(half_swap(), v2(1, 1)).model();
  const Element x = Element::vector(v2(1, 3));
  const MapModel g = f.relaxed(0.25);
  CHECK(g(x).vec().isApprox(0.25 * f(x).vec() + 0.75 * x.vec(), 1e-15));
  CHECK_THROWS_AS(f.relaxed(1.5), InvalidArgument);
  const MapModel h = f.scaled(2.0);
  CHECK(h(x).vec().isApprox(2.0 * f(x).vec(), 1e-15));
  CHECK(identity_map(Cone::pd(2))(Element::unit(Cone::pd(2))).mat() == CMatrix::Identity(2, 2));
}
