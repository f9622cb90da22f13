#ifndef CONEFP_SOLVER_HPP
#define CONEFP_SOLVER_HPP

#include <optional>
#include <string>
#include <vector>

#include "conefp/spectral.hpp"

namespace conefp {

struct IterationConfig {
  double alpha = 0.5;  // relaxation weight on f(x)
  double tol = 1e-10;  // on the Thompson residual d_T(x, f(x))
  long max_iter = 100000;
  bool record_trace = false;   // per-step residuals
  bool record_points = false;  // per-step iterates

  /// Throws InvalidArgument unless 0 < alpha < 1, tol > 0, max_iter > 0.
  void validate() const;
};

enum class SolveStatus { Converged, MaxIterations, BoundaryEscape };

std::string to_string(SolveStatus status);

struct SolveReport {
  SolveStatus status = SolveStatus::MaxIterations;
  Element point;
  double residual = 0.0;
  long iterations = 0;
  std::vector<double> trace;
  std::vector<Element> points;
  std::optional<Certificate> certificate;
};

/// Iterates x <- alpha f(x) + (1 - alpha) x until d_T(x, f(x)) <= tol.
///
/// On convergence the reported point is f(x) whenever its own residual is
/// still within tol (always the case for a nonexpansive f up to rounding),
/// otherwise x. Orbits whose interior margin drops to 1e-300, or whose size
/// exceeds 1e300, end with BoundaryEscape.
SolveReport krasnoselskii_solve(const MapModel& f, const ConePoint& x0, const IterationConfig& cfg = {});

/// [x0, f(x0), ..., f^n(x0)]. Throws DomainError if the orbit leaves the
/// interior.
std::vector<Element> picard_iterate(const MapModel& f, const ConePoint& x0, long n);

enum class Direction { Up, Down };

/// Picard iteration from a sub-fixed point (Up: f(x0) >= x0) or a
/// super-fixed point (Down: f(x0) <= x0) of an order-preserving map. The
/// iterates are checked to move monotonically; alpha is ignored.
SolveReport monotone_solve(const MapModel& f, const ConePoint& x0, Direction direction,
                           const IterationConfig& cfg = {});

/// Krasnoselskii iteration on x -> f(x) / mu. Converges to an eigenvector
/// f(x) = mu x for r(f) < mu < lambda(f).
SolveReport eigen_solve(const MapModel& f, double mu, const ConePoint& x0, const IterationConfig& cfg = {});

}  // namespace conefp

#endif  // CONEFP_SOLVER_HPP
