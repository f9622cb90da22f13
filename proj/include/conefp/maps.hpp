#ifndef CONEFP_MAPS_HPP
#define CONEFP_MAPS_HPP

#include <functional>
#include <optional>
#include <vector>

#include "conefp/cone.hpp"

namespace conefp {

/// Structural properties a map's constructor declares. They are never
/// inferred; property tests spot-check them.
struct MapFlags {
  bool order_preserving = false;
  bool subhomogeneous = false;
  bool homogeneous = false;
  bool analytic = false;
};

/// A self-map of a cone, evaluated on interior points, with optional exact
/// recession maps f_inf(x) = lim t^-1 f(tx) and (L f L)_inf, where L is the
/// order-reversing isometry of the cone.
///
/// Interior-valued models check in debug builds that every output lies in
/// the interior. Recession models are closed-cone valued and skip the check.
class MapModel {
 public:
  using Evaluator = std::function<Element(const Element&)>;

  MapModel(Cone cone, Evaluator evaluate, MapFlags flags);

  MapModel& with_recession(Evaluator recession);
  MapModel& with_conjugate_recession(Evaluator conjugate_recession);
  MapModel& closed_valued();

  Element operator()(const Element& x) const;

  const Cone& cone() const { return cone_; }
  const MapFlags& flags() const { return flags_; }
  bool interior_valued() const { return interior_valued_; }
  bool has_recession() const { return static_cast<bool>(recession_); }
  bool has_conjugate_recession() const { return static_cast<bool>(conjugate_recession_); }

  /// The exact recession map as a homogeneous, closed-cone valued model.
  std::optional<MapModel> recession_map() const;
  /// The exact recession map of L f L.
  std::optional<MapModel> conjugate_recession_map() const;

  /// x -> L(f(L(x))). Order-preservation and subhomogeneity carry over; the
  /// two recession evaluators swap roles.
  MapModel conjugate() const;
  /// x -> s * f(x) for s > 0.
  MapModel scaled(double s) const;
  /// x -> alpha f(x) + (1 - alpha) x.
  MapModel relaxed(double alpha) const;

 private:
  Cone cone_;
  Evaluator evaluate_;
  MapFlags flags_;
  Evaluator recession_;
  Evaluator conjugate_recession_;
  bool interior_valued_ = true;
};

/// x -> M x + b on the orthant, M and b entrywise nonnegative, every row of
/// [M | b] nonzero so interior points map to interior points.
class AffineOrthantMap {
 public:
  AffineOrthantMap(Matrix m, Vector b);

  const Matrix& matrix() const { return m_; }
  const Vector& offset() const { return b_; }
  Index dim() const { return b_.size(); }
  bool is_linear() const { return b_.isZero(0.0); }

  Vector operator()(const Vector& x) const;
  /// Exact recession x -> M x.
  Vector recession(const Vector& x) const;
  /// Exact (L f L)_inf: zero in rows with b_i > 0, 1 / (M x^-1)_i otherwise.
  Vector conjugate_recession(const Vector& x) const;

  MapModel model() const;

 private:
  Matrix m_;
  Vector b_;
};

Vector eval_affine(const AffineOrthantMap& map, const Vector& x);

/// x -> (x_{sigma(0)}, ..., x_{sigma(n-1)}) + b. A Thompson isometry when
/// b = 0.
class PermutationAffineMap {
 public:
  PermutationAffineMap(std::vector<Index> perm, Vector b);

  const std::vector<Index>& permutation() const { return perm_; }
  const Vector& offset() const { return b_; }
  Index dim() const { return b_.size(); }

  Vector operator()(const Vector& x) const;
  MapModel model() const;

 private:
  std::vector<Index> perm_;
  Vector b_;
};

Vector eval_perm_affine(const std::vector<Index>& perm, const Vector& b, const Vector& x);

/// Identity on the interior of a cone.
MapModel identity_map(const Cone& cone);
/// The homogeneous linear map x -> M x on the orthant (M nonnegative, no zero
/// rows). Its own recession map.
MapModel linear_map(const Matrix& m);

struct RecessionEstimate {
  Element value;
  bool converged = false;
  bool on_boundary = false;  // m(value / x) <= tol
  std::size_t evaluations = 0;
  std::vector<Element> trace;  // t^-1 f(t x) for every probed t
};

/// Geometric schedule t = 2^j, j = 0..40.
std::vector<double> default_recession_schedule();

/// Probes t^-1 f(t x) along an increasing schedule, stopping once two
/// consecutive probes differ by at most tol in the order-unit norm at x. For
/// subhomogeneous f the probes decrease monotonically to f_inf(x).
RecessionEstimate recession_estimate(const MapModel& f, const Element& x,
                                     const std::vector<double>& schedule = default_recession_schedule(),
                                     double tol = 1e-9);

}  // namespace conefp

#endif  // CONEFP_MAPS_HPP
