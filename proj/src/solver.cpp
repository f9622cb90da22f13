#include "conefp/solver.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace conefp {

namespace {

constexpr double kEscapeMargin = 1e-300;
constexpr double kEscapeSize = 1e300;
constexpr double kInf = std::numeric_limits<double>::infinity();

// True when x is still a usable interior point; false when the orbit has
// escaped toward the boundary or to infinity. NaN is a hard failure.
bool healthy(const Element& x) {
  if (x.is_orthant()) {
    if (x.vec().hasNaN()) throw NumericalFailure("iterate contains NaN");
    if (!x.vec().allFinite()) return false;
    return x.vec().minCoeff() > kEscapeMargin && x.vec().cwiseAbs().maxCoeff() < kEscapeSize;
  }
  if (x.mat().hasNaN()) throw NumericalFailure("iterate contains NaN");
  if (!x.mat().allFinite()) return false;
  const Vector ev = hermitian_eigenvalues(x.mat());
  return ev(0) > kEscapeMargin && ev(ev.size() - 1) < kEscapeSize;
}

std::optional<Element> checked_eval(const MapModel& f, const Element& x) {
  try {
    Element y = f(x);
    if (!healthy(y)) return std::nullopt;
    return y;
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

std::optional<double> checked_distance(const Element& x, const Element& y) {
  try {
    return thompson_distance(x, y);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

void require_cone(const MapModel& f, const ConePoint& x0) {
  if (!(f.cone() == x0.cone())) {
    throw DimensionMismatch("start point lives in " + x0.cone().describe() + ", map acts on " +
                            f.cone().describe());
  }
}

SolveReport escaped(SolveReport rep, Element at, long iterations) {
  rep.status = SolveStatus::BoundaryEscape;
  rep.point = std::move(at);
  rep.residual = kInf;
  rep.iterations = iterations;
  return rep;
}

// Reports f(x) instead of x when it is at least as good a fixed-point
// approximation.
void finish_converged(SolveReport& rep, const MapModel& f, const Element& x, const Element& fx,
                      double residual, double tol) {
  rep.status = SolveStatus::Converged;
  rep.point = x;
  rep.residual = residual;
  if (auto ffx = checked_eval(f, fx)) {
    if (auto r2 = checked_distance(fx, *ffx); r2 && *r2 <= tol) {
      rep.point = fx;
      rep.residual = *r2;
    }
  }
}

std::string precondition_detail(const Element& x, const Element& fx, Direction dir) {
  std::ostringstream os;
  os.precision(17);
  if (x.is_orthant()) {
    const Vector r = fx.vec().cwiseQuotient(x.vec());
    Index i = 0;
    if (dir == Direction::Up) {
      r.minCoeff(&i);
    } else {
      r.maxCoeff(&i);
    }
    os << "coordinate " << i << ": f(x0)_" << i << " = " << fx.vec()(i) << ", x0_" << i << " = "
       << x.vec()(i);
  } else {
    auto [lo, hi] = ratio_bounds(fx, x);
    os << "eigenvalue " << (dir == Direction::Up ? lo : hi) << " of x0^-1/2 f(x0) x0^-1/2";
  }
  return os.str();
}

}  // namespace

void IterationConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0,1)");
  if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
  if (max_iter <= 0) throw InvalidArgument("max_iter must be positive");
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged:
      return "converged";
    case SolveStatus::MaxIterations:
      return "max_iterations";
    case SolveStatus::BoundaryEscape:
      return "boundary_escape";
  }
  return "max_iterations";
}

SolveReport krasnoselskii_solve(const MapModel& f, const ConePoint& x0, const IterationConfig& cfg) {
  cfg.validate();
  require_cone(f, x0);

  SolveReport rep;
  Element x = x0;
  for (long n = 0;; ++n) {
    if (!healthy(x)) return escaped(std::move(rep), x, n);
    if (cfg.record_points) rep.points.push_back(x);
    auto fx = checked_eval(f, x);
    if (!fx) return escaped(std::move(rep), x, n);
    auto r = checked_distance(x, *fx);
    if (!r) return escaped(std::move(rep), x, n);
    if (cfg.record_trace) rep.trace.push_back(*r);

    if (*r <= cfg.tol) {
      rep.iterations = n;
      finish_converged(rep, f, x, *fx, *r, cfg.tol);
      return rep;
    }
    if (n >= cfg.max_iter) {
      rep.status = SolveStatus::MaxIterations;
      rep.point = x;
      rep.residual = *r;
      rep.iterations = n;
      return rep;
    }
    x = *fx * cfg.alpha + x * (1.0 - cfg.alpha);
  }
}

std::vector<Element> picard_iterate(const MapModel& f, const ConePoint& x0, long n) {
  require_cone(f, x0);
  if (n < 0) throw InvalidArgument("picard_iterate: negative step count");
  std::vector<Element> orbit;
  orbit.reserve(static_cast<std::size_t>(n) + 1);
  orbit.push_back(x0);
  for (long k = 1; k <= n; ++k) {
    auto next = checked_eval(f, orbit.back());
    if (!next) throw DomainError("orbit left the cone interior at step " + std::to_string(k));
    orbit.push_back(std::move(*next));
  }
  return orbit;
}

SolveReport monotone_solve(const MapModel& f, const ConePoint& x0, Direction direction,
                           const IterationConfig& cfg) {
  cfg.validate();
  require_cone(f, x0);
  if (!f.flags().order_preserving) throw InvalidArgument("monotone_solve requires an order-preserving map");

  SolveReport rep;
  Element x = x0;
  auto fx = checked_eval(f, x);
  if (!fx) return escaped(std::move(rep), x, 0);

  {
    auto [lo, hi] = ratio_bounds(*fx, x);
    const bool ok = direction == Direction::Up ? lo >= 1.0 - 1e-12 : hi <= 1.0 + 1e-12;
    if (!ok) {
      throw PreconditionViolation(std::string(direction == Direction::Up ? "f(x0) >= x0" : "f(x0) <= x0") +
                                  " fails at " + precondition_detail(x, *fx, direction));
    }
  }

  for (long n = 0;; ++n) {
    if (cfg.record_points) rep.points.push_back(x);
    auto r = checked_distance(x, *fx);
    if (!r) return escaped(std::move(rep), x, n);
    if (cfg.record_trace) rep.trace.push_back(*r);

    if (*r <= cfg.tol) {
      rep.iterations = n;
      finish_converged(rep, f, x, *fx, *r, cfg.tol);
      return rep;
    }
    if (n >= cfg.max_iter) {
      rep.status = SolveStatus::MaxIterations;
      rep.point = x;
      rep.residual = *r;
      rep.iterations = n;
      return rep;
    }

    auto [lo, hi] = ratio_bounds(*fx, x);
    if (direction == Direction::Up ? lo < 1.0 - 1e-9 : hi > 1.0 + 1e-9) {
      std::ostringstream os;
      os.precision(17);
      os << "monotone iteration reversed direction at step " << n << " (ratio "
         << (direction == Direction::Up ? lo : hi) << ")";
      throw NumericalFailure(os.str());
    }

    x = std::move(*fx);
    if (!healthy(x)) return escaped(std::move(rep), x, n + 1);
    fx = checked_eval(f, x);
    if (!fx) return escaped(std::move(rep), x, n + 1);
  }
}

SolveReport eigen_solve(const MapModel& f, double mu, const ConePoint& x0, const IterationConfig& cfg) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw InvalidArgument("eigenvalue mu must be positive");
  return krasnoselskii_solve(f.scaled(1.0 / mu), x0, cfg);
}

}  // namespace conefp
