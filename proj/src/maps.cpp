#include "conefp/maps.hpp"

#include <cmath>
#include <sstream>

namespace conefp {

MapModel::MapModel(Cone cone, Evaluator evaluate, MapFlags flags)
    : cone_(cone), evaluate_(std::move(evaluate)), flags_(flags) {
  if (!evaluate_) throw InvalidArgument("MapModel requires an evaluator");
}

MapModel& MapModel::with_recession(Evaluator recession) {
  recession_ = std::move(recession);
  return *this;
}

MapModel& MapModel::with_conjugate_recession(Evaluator conjugate_recession) {
  conjugate_recession_ = std::move(conjugate_recession);
  return *this;
}

MapModel& MapModel::closed_valued() {
  interior_valued_ = false;
  return *this;
}

Element MapModel::operator()(const Element& x) const {
  if (!(x.cone() == cone_)) {
    throw DimensionMismatch("map on " + cone_.describe() + " applied to a point of " +
                            x.cone().describe());
  }
  Element y = evaluate_(x);
#ifndef NDEBUG
  if (interior_valued_ && y.is_finite() && !in_interior(y, 0.0)) {
    throw DomainError("map output left the interior of " + cone_.describe());
  }
#endif
  return y;
}

std::optional<MapModel> MapModel::recession_map() const {
  if (!recession_) return std::nullopt;
  MapFlags f{flags_.order_preserving, true, true, false};
  MapModel m(cone_, recession_, f);
  m.closed_valued();
  return m;
}

std::optional<MapModel> MapModel::conjugate_recession_map() const {
  if (!conjugate_recession_) return std::nullopt;
  MapFlags f{flags_.order_preserving, true, true, false};
  MapModel m(cone_, conjugate_recession_, f);
  m.closed_valued();
  return m;
}

MapModel MapModel::conjugate() const {
  auto inner = evaluate_;
  MapModel m(cone_, [inner](const Element& x) { return inner(x.inverse()).inverse(); }, flags_);
  m.recession_ = conjugate_recession_;
  m.conjugate_recession_ = recession_;
  return m;
}

MapModel MapModel::scaled(double s) const {
  if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgument("scale factor must be positive");
  auto inner = evaluate_;
  MapModel m(cone_, [inner, s](const Element& x) { return inner(x) * s; }, flags_);
  if (recession_) {
    auto rec = recession_;
    m.recession_ = [rec, s](const Element& x) { return rec(x) * s; };
  }
  if (conjugate_recession_) {
    // L(s f(L x)) = s^-1 (L f L)(x), and recession commutes with scaling.
    auto rec = conjugate_recession_;
    m.conjugate_recession_ = [rec, s](const Element& x) { return rec(x) * (1.0 / s); };
  }
  m.interior_valued_ = interior_valued_;
  return m;
}

MapModel MapModel::relaxed(double alpha) const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("relaxation alpha must lie in (0,1)");
  auto inner = evaluate_;
  MapModel m(cone_, [inner, alpha](const Element& x) { return inner(x) * alpha + x * (1.0 - alpha); },
             flags_);
  if (recession_) {
    auto rec = recession_;
    m.recession_ = [rec, alpha](const Element& x) { return rec(x) * alpha + x * (1.0 - alpha); };
  }
  m.interior_valued_ = interior_valued_;
  return m;
}

// ---------------------------------------------------------------------------
// Affine maps
// ---------------------------------------------------------------------------

AffineOrthantMap::AffineOrthantMap(Matrix m, Vector b) : m_(std::move(m)), b_(std::move(b)) {
  const Index n = b_.size();
  if (n == 0) throw InvalidArgument("affine map: dimension must be positive");
  if (m_.rows() != n || m_.cols() != n) {
    std::ostringstream os;
    os << "affine map: matrix is " << m_.rows() << "x" << m_.cols() << " but offset has length " << n;
    throw DimensionMismatch(os.str());
  }
  if (!m_.allFinite() || !b_.allFinite()) throw InvalidArgument("affine map: non-finite entry");
  for (Index i = 0; i < n; ++i) {
    if (b_(i) < 0.0) {
      throw InvalidArgument("affine map: offset entry " + std::to_string(i) + " is negative");
    }
    for (Index j = 0; j < n; ++j) {
      if (m_(i, j) < 0.0) {
        throw InvalidArgument("affine map: matrix entry (" + std::to_string(i) + "," +
                              std::to_string(j) + ") is negative");
      }
    }
    if (b_(i) == 0.0 && m_.row(i).isZero(0.0)) {
      throw InvalidArgument("affine map: row " + std::to_string(i) +
                            " of [M | b] is zero, so interior points leave the interior");
    }
  }
}

Vector AffineOrthantMap::operator()(const Vector& x) const {
  if (x.size() != dim()) throw DimensionMismatch("affine map: argument has wrong length");
  return m_ * x + b_;
}

Vector AffineOrthantMap::recession(const Vector& x) const {
  if (x.size() != dim()) throw DimensionMismatch("affine map: argument has wrong length");
  return m_ * x;
}

Vector AffineOrthantMap::conjugate_recession(const Vector& x) const {
  if (x.size() != dim()) throw DimensionMismatch("affine map: argument has wrong length");
  const Vector inv = x.cwiseInverse();
  Vector out(dim());
  for (Index i = 0; i < dim(); ++i) {
    out(i) = b_(i) > 0.0 ? 0.0 : 1.0 / m_.row(i).dot(inv);
  }
  return out;
}

MapModel AffineOrthantMap::model() const {
  const AffineOrthantMap self = *this;
  MapFlags flags{true, true, is_linear(), true};
  MapModel m(Cone::orthant(dim()), [self](const Element& x) { return Element::vector(self(x.vec())); },
             flags);
  m.with_recession([self](const Element& x) { return Element::vector(self.recession(x.vec())); });
  m.with_conjugate_recession(
      [self](const Element& x) { return Element::vector(self.conjugate_recession(x.vec())); });
  return m;
}

Vector eval_affine(const AffineOrthantMap& map, const Vector& x) { return map(x); }

MapModel linear_map(const Matrix& m) { return AffineOrthantMap(m, Vector::Zero(m.rows())).model(); }

// ---------------------------------------------------------------------------
// Permutation maps
// ---------------------------------------------------------------------------

namespace {

void validate_permutation(const std::vector<Index>& perm, Index n) {
  if (static_cast<Index>(perm.size()) != n) {
    throw InvalidArgument("permutation length " + std::to_string(perm.size()) +
                          " does not match dimension " + std::to_string(n));
  }
  std::vector<bool> seen(perm.size(), false);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    const Index p = perm[i];
    if (p < 0 || p >= n || seen[static_cast<std::size_t>(p)]) {
      throw InvalidArgument("invalid permutation: entry " + std::to_string(i) + " = " +
                            std::to_string(p));
    }
    seen[static_cast<std::size_t>(p)] = true;
  }
}

}  // namespace

Vector eval_perm_affine(const std::vector<Index>& perm, const Vector& b, const Vector& x) {
  validate_permutation(perm, b.size());
  if (x.size() != b.size()) throw DimensionMismatch("permutation map: argument has wrong length");
  Vector out(b.size());
  for (Index i = 0; i < b.size(); ++i) out(i) = x(perm[static_cast<std::size_t>(i)]) + b(i);
  return out;
}

PermutationAffineMap::PermutationAffineMap(std::vector<Index> perm, Vector b)
    : perm_(std::move(perm)), b_(std::move(b)) {
  validate_permutation(perm_, b_.size());
  if (!b_.allFinite() || (b_.array() < 0.0).any()) {
    throw InvalidArgument("permutation map: offset must be finite and nonnegative");
  }
}

Vector PermutationAffineMap::operator()(const Vector& x) const {
  if (x.size() != dim()) throw DimensionMismatch("permutation map: argument has wrong length");
  Vector out(dim());
  for (Index i = 0; i < dim(); ++i) out(i) = x(perm_[static_cast<std::size_t>(i)]) + b_(i);
  return out;
}

MapModel PermutationAffineMap::model() const {
  const PermutationAffineMap self = *this;
  MapFlags flags{true, true, b_.isZero(0.0), true};
  MapModel m(Cone::orthant(dim()), [self](const Element& x) { return Element::vector(self(x.vec())); },
             flags);
  m.with_recession([self](const Element& x) {
    return Element::vector(self(x.vec()) - self.offset());
  });
  m.with_conjugate_recession([self](const Element& x) {
    Vector out = self(x.vec()) - self.offset();
    for (Index i = 0; i < self.dim(); ++i) {
      if (self.offset()(i) > 0.0) out(i) = 0.0;
    }
    return Element::vector(out);
  });
  return m;
}

MapModel identity_map(const Cone& cone) {
  MapModel m(cone, [](const Element& x) { return x; }, MapFlags{true, true, true, true});
  m.with_recession([](const Element& x) { return x; });
  m.with_conjugate_recession([](const Element& x) { return x; });
  return m;
}

// ---------------------------------------------------------------------------
// Recession estimation
// ---------------------------------------------------------------------------

std::vector<double> default_recession_schedule() {
  std::vector<double> t;
  for (int j = 0; j <= 40; ++j) t.push_back(std::ldexp(1.0, j));
  return t;
}

RecessionEstimate recession_estimate(const MapModel& f, const Element& x,
                                     const std::vector<double>& schedule, double tol) {
  if (schedule.empty()) throw InvalidArgument("recession_estimate: empty schedule");
  if (!(tol > 0.0)) throw InvalidArgument("recession_estimate: tol must be positive");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] > 0.0) || (i > 0 && !(schedule[i] > schedule[i - 1]))) {
      throw InvalidArgument("recession_estimate: schedule must be positive and increasing");
    }
  }

  RecessionEstimate out;
  if (f.flags().homogeneous) {
    out.value = f(x);
    out.evaluations = 1;
    out.converged = true;
    out.trace.push_back(out.value);
    out.on_boundary = min_ratio(out.value, x) <= tol;
    return out;
  }

  std::optional<Element> prev;
  for (double t : schedule) {
    Element probe = f(x * t) * (1.0 / t);
    ++out.evaluations;
    if (!probe.is_finite()) throw NumericalFailure("recession_estimate: non-finite evaluation");
    out.trace.push_back(probe);
    if (prev && order_unit_norm(probe - *prev, x) <= tol) {
      out.value = std::move(probe);
      out.converged = true;
      break;
    }
    prev = std::move(probe);
  }
  if (!out.converged) out.value = *prev;
  // The estimate is only tol-accurate in ||.||_x, so judge the boundary at that scale.
  out.on_boundary = min_ratio(out.value, x) <= tol;
  return out;
}

}  // namespace conefp
