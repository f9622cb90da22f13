#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace conefp;
using namespace conefp::testing;

namespace {

Element v2(double a, double b) {
  Vector v(2);
  v << a, b;
  return Element::vector(v);
}

Element scalar_pd(double x) { return Element::hermitian(Matrix(Matrix::Constant(1, 1, x))); }

MapModel swap_map() { return PermutationAffineMap({1, 0}, Vector::Zero(2)).model(); }

Matrix half_swap() {
  Matrix m(2, 2);
  m << 0, 0.5, 0.5, 0;
  return m;
}

// f(x) = 0.5 x + 1 on the 1-D orthant.
MapModel half_plus_one() { return AffineOrthantMap(Matrix::Constant(1, 1, 0.5), Vector::Ones(1)).model(); }

}  // namespace

TEST_CASE("iteration config validation") {
  IterationConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.alpha = 1.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg.alpha = 0.5;
  cfg.tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg.tol = 1e-10;
  cfg.max_iter = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

TEST_CASE("krasnoselskii examples") {
  SolveReport rep = krasnoselskii_solve(swap_map(), ConePoint(v2(1, 2)));
  CHECK(rep.status == SolveStatus::Converged);
  CHECK(rep.iterations == 1);
  CHECK(rep.point.vec() == v2(1.5, 1.5).vec());

  const MapModel affine = AffineOrthantMap(half_swap(), Vector::Ones(2)).model();
  rep = krasnoselskii_solve(affine, ConePoint(Element::unit(Cone::orthant(2))));
  CHECK(rep.status == SolveStatus::Converged);
  const Vector oracle = (Matrix::Identity(2, 2) - half_swap()).partialPivLu().solve(Vector::Ones(2));
  CHECK(thompson_distance(rep.point, Element::vector(oracle)) <= 1e-10);
  CHECK(rep.residual <= 1e-10);

  const Element x0 = v2(0.3, 7);
  rep = krasnoselskii_solve(identity_map(Cone::orthant(2)), ConePoint(x0));
  CHECK(rep.status == SolveStatus::Converged);
  CHECK(rep.iterations == 0);
  CHECK(rep.point.vec() == x0.vec());
}

TEST_CASE("krasnoselskii reports budget exhaustion and boundary escape") {
  IterationConfig cfg;
  cfg.max_iter = 3;
  cfg.record_trace = true;
  const MapModel affine = AffineOrthantMap(half_swap(), Vector::Ones(2)).model();
  SolveReport rep = krasnoselskii_solve(affine, ConePoint(Element::unit(Cone::orthant(2))), cfg);
  CHECK(rep.status == SolveStatus::MaxIterations);
  CHECK(rep.iterations == 3);
  CHECK(rep.trace.size() == 4);
  CHECK(rep.residual > cfg.tol);

  // Homogeneous contraction drives the orbit into the boundary.
  rep = krasnoselskii_solve(linear_map(half_swap()), ConePoint(Element::unit(Cone::orthant(2))));
  CHECK(rep.status == SolveStatus::BoundaryEscape);

  // Unbounded growth.
  const MapModel grow = AffineOrthantMap(Matrix::Identity(2, 2) * 2.0, Vector::Ones(2)).model();
  rep = krasnoselskii_solve(grow, ConePoint(Element::unit(Cone::orthant(2))));
  CHECK(rep.status == SolveStatus::BoundaryEscape);

  CHECK_THROWS_AS(krasnoselskii_solve(affine, ConePoint(Element::unit(Cone::orthant(3)))), DimensionMismatch);
}

TEST_CASE("converged reports honour the tolerance") {
  Rng rng(201);
  for (int trial = 0; trial < 30; ++trial) {
    const RiccatiProblem p = rng.riccati(rng.integer(1, 4), trial % 2 == 0);
    if (!sufficient_uniqueness_check(p).passes) continue;
    IterationConfig cfg;
    cfg.alpha = rng.uniform(0.2, 0.9);
    const SolveReport rep = krasnoselskii_solve(p.model(), ConePoint(Element::unit(p.cone())), cfg);
    REQUIRE(rep.status == SolveStatus::Converged);
    CHECK(rep.residual <= cfg.tol);
    CHECK(thompson_distance(rep.point, p.model()(rep.point)) <= cfg.tol);
  }
}

TEST_CASE("picard iteration") {
  const std::vector<Element> orbit = picard_iterate(swap_map(), ConePoint(v2(1, 2)), 2);
  REQUIRE(orbit.size() == 3);
  CHECK(orbit[0].vec() == v2(1, 2).vec());
  CHECK(orbit[1].vec() == v2(2, 1).vec());
  CHECK(orbit[2].vec() == v2(1, 2).vec());

  for (const Element& e : picard_iterate(identity_map(Cone::pd(2)), ConePoint(Element::unit(Cone::pd(2))), 5)) {
    CHECK(e.mat() == CMatrix::Identity(2, 2));
  }

  const std::vector<Element> golden = picard_iterate(golden_problem().model(), ConePoint(scalar_pd(1.0)), 60);
  CHECK(std::abs(golden.back().mat()(0, 0).real() - kGolden) < 1e-12);
  CHECK_THROWS_AS(picard_iterate(swap_map(), ConePoint(v2(1, 2)), -1), InvalidArgument);
}

TEST_CASE("monotone iteration") {
  const MapModel f = golden_problem().model();
  IterationConfig cfg;
  cfg.record_points = true;
  SolveReport up = monotone_solve(f, ConePoint(scalar_pd(1.0)), Direction::Up, cfg);
  CHECK(up.status == SolveStatus::Converged);
  CHECK(std::abs(up.point.mat()(0, 0).real() - kGolden) < 1e-9);
  for (std::size_t k = 1; k < up.points.size(); ++k) {
    CHECK(up.points[k].mat()(0, 0).real() >= up.points[k - 1].mat()(0, 0).real() - 1e-9);
  }

  SolveReport down = monotone_solve(f, ConePoint(scalar_pd(3.0)), Direction::Down, cfg);
  CHECK(down.status == SolveStatus::Converged);
  CHECK(std::abs(down.point.mat()(0, 0).real() - kGolden) < 1e-9);
  for (std::size_t k = 1; k < down.points.size(); ++k) {
    CHECK(down.points[k].mat()(0, 0).real() <= down.points[k - 1].mat()(0, 0).real() + 1e-9);
  }

  const SolveReport fixed = monotone_solve(f, ConePoint(scalar_pd(kGolden)), Direction::Up);
  CHECK(fixed.status == SolveStatus::Converged);
  CHECK(fixed.iterations == 0);

  CHECK_THROWS_AS(monotone_solve(f, ConePoint(scalar_pd(3.0)), Direction::Up), PreconditionViolation);
  CHECK_THROWS_AS(monotone_solve(f, ConePoint(scalar_pd(1.0)), Direction::Down), PreconditionViolation);
}

TEST_CASE("monotone traces on random Riccati problems") {
  Rng rng(211);
  int checked = 0;
  for (int trial = 0; trial < 60 && checked < 20; ++trial) {
    const RiccatiProblem p = rng.riccati(rng.integer(1, 4), trial % 2 == 1);
    if (!sufficient_uniqueness_check(p).passes) continue;
    const MapModel f = p.model();
    // Small and large multiples of I bracket the fixed point when f is attracting.
    const Element lo = Element::unit(p.cone()) * 1e-6;
    const Element hi = Element::unit(p.cone()) * 1e6;
    IterationConfig cfg;
    cfg.record_points = true;
    cfg.max_iter = 200000;
    const Element flo = f(lo);
    if (min_ratio(flo, lo) < 1.0 || max_ratio(f(hi), hi) > 1.0) continue;
    ++checked;
    const SolveReport up = monotone_solve(f, ConePoint(lo), Direction::Up, cfg);
    const SolveReport down = monotone_solve(f, ConePoint(hi), Direction::Down, cfg);
    for (std::size_t k = 1; k < up.points.size(); ++k) {
      CHECK(loewner_min(up.points[k].mat() - up.points[k - 1].mat()) >= -1e-9 * spectral_norm(up.points[k].mat()));
    }
    for (std::size_t k = 1; k < down.points.size(); ++k) {
      CHECK(loewner_min(down.points[k - 1].mat() - down.points[k].mat()) >=
            -1e-9 * spectral_norm(down.points[k - 1].mat()));
    }
    if (up.status == SolveStatus::Converged && down.status == SolveStatus::Converged) {
      const SolveReport kr = krasnoselskii_solve(f, ConePoint(Element::unit(p.cone())));
      REQUIRE(kr.status == SolveStatus::Converged);
      CHECK(thompson_distance(kr.point, up.point) <= 10 * 1e-10);
      CHECK(thompson_distance(kr.point, down.point) <= 10 * 1e-10);
    }
  }
  CHECK(checked > 5);
}

TEST_CASE("eigenvalue solves inside and outside the Collatz-Wielandt interval") {
  IterationConfig cfg;
  cfg.tol = 1e-12;
  const Element x0 = Element::unit(Cone::orthant(1));
  SolveReport rep = eigen_solve(half_plus_one(), 0.75, ConePoint(x0), cfg);
  CHECK(rep.status == SolveStatus::Converged);
  CHECK(std::abs(rep.point.vec()(0) - 4.0) <= 1e-10);
  rep = eigen_solve(half_plus_one(), 1.0, ConePoint(x0), cfg);
  CHECK(rep.status == SolveStatus::Converged);
  CHECK(std::abs(rep.point.vec()(0) - 2.0) <= 1e-10);
  rep = eigen_solve(half_plus_one(), 0.25, ConePoint(x0), cfg);
  CHECK(rep.status != SolveStatus::Converged);
  CHECK_THROWS_AS(eigen_solve(half_plus_one(), 0.0, ConePoint(x0), cfg), InvalidArgument);
}

TEST_CASE("relaxed maps stay nonexpansive") {
  Rng rng(221);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = rng.integer(1, 4);
    const RiccatiProblem p = rng.riccati(n, trial % 2 == 0);
    const MapModel g = p.model().relaxed(rng.uniform(0.01, 0.99));
    const Element x = rng.pd_point(n, trial % 2 == 0, 0.05, 20.0);
    const Element y = rng.pd_point(n, trial % 2 == 0, 0.05, 20.0);
    CHECK(thompson_distance(g(x), g(y)) <= thompson_distance(x, y) + 1e-9);
  }
}

TEST_CASE("Krasnoselskii iterates are Fejer monotone") {
  const MapModel f = golden_problem().model();
  const Element u = scalar_pd(kGolden);
  Rng rng(231);
  for (int trial = 0; trial < 20; ++trial) {
    IterationConfig cfg;
    cfg.alpha = rng.uniform(0.05, 0.95);
    cfg.record_points = true;
    const SolveReport rep = krasnoselskii_solve(f, ConePoint(scalar_pd(std::exp(rng.uniform(-5, 5)))), cfg);
    for (std::size_t k = 1; k < rep.points.size(); ++k) {
      CHECK(thompson_distance(rep.points[k], u) <= thompson_distance(rep.points[k - 1], u) + 1e-9);
    }
  }

  const MapModel affine = AffineOrthantMap(half_swap(), Vector::Ones(2)).model();
  const Element w = v2(2, 2);
  IterationConfig cfg;
  cfg.record_points = true;
  const SolveReport rep = krasnoselskii_solve(affine, ConePoint(v2(0.01, 50)), cfg);
  for (std::size_t k = 1; k < rep.points.size(); ++k) {
    CHECK(thompson_distance(rep.points[k], w) <= thompson_distance(rep.points[k - 1], w) + 1e-9);
  }
}

TEST_CASE("ball contraction for the golden-ratio map") {
  const MapModel f = golden_problem().model();
  const Element u = scalar_pd(kGolden);
  const double radius = 2.0;
  for (double sign : {-1.0, 1.0}) {
    const Element start = u * std::exp(sign * radius);
    const std::vector<Element> orbit = picard_iterate(f, ConePoint(start), 200);
    bool inside = false;
    for (const Element& e : orbit) inside = inside || thompson_distance(e, u) < 1.0;
    CHECK(inside);
  }
}
