#include "conefp/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace conefp {

namespace {

// Runs v_k = (f + id)^k(u) normalized by ||.||_u. The callback receives k,
// log ||(f + id)^k(u)||_u and the Collatz-Wielandt ratio M((f+id)(v)/v) of
// the previous normalized iterate; returning false stops the run.
template <typename Visit>
void perturbed_power_iteration(const MapModel& f, const Element& u, int k_max, Visit&& visit) {
  if (k_max <= 0) throw InvalidArgument("k_max must be positive");
  if (!(u.cone() == f.cone())) throw DimensionMismatch("order unit lives in a different cone");
  if (!in_interior(u)) throw DomainError("order unit must be an interior point");

  Element v = u * (1.0 / order_unit_norm(u, u));
  double log_scale = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    Element w = f(v) + v;
    if (!w.is_finite()) throw NumericalFailure("perturbed power iteration produced non-finite values");
    const double ratio = max_ratio(w, v);
    const double nrm = order_unit_norm(w, u);
    if (!(nrm > 0.0) || !std::isfinite(nrm)) {
      throw NumericalFailure("perturbed power iteration lost scale");
    }
    log_scale += std::log(nrm);
    v = w * (1.0 / nrm);
    if (!visit(k, log_scale, ratio)) break;
  }
}

MapModel numeric_recession_model(const MapModel& f, std::vector<double> schedule, double tol) {
  MapFlags flags{f.flags().order_preserving, true, true, false};
  MapModel m(
      f.cone(),
      [f, schedule = std::move(schedule), tol](const Element& x) {
        RecessionEstimate est = recession_estimate(f, x, schedule, tol);
        if (!est.converged) throw NumericalFailure("recession estimate did not converge");
        return est.value;
      },
      flags);
  m.closed_valued();
  return m;
}

}  // namespace

MapModel recession_model(const MapModel& f, const std::vector<double>& schedule, double tol) {
  if (auto exact = f.recession_map()) return *exact;
  if (f.flags().homogeneous) {
    MapModel m = f;
    return m.closed_valued();
  }
  return numeric_recession_model(f, schedule, tol);
}

MapModel conjugate_recession_model(const MapModel& f, const std::vector<double>& schedule, double tol) {
  if (auto exact = f.conjugate_recession_map()) return *exact;
  return recession_model(f.conjugate(), schedule, tol);
}

std::string to_string(Certificate::Kind kind) {
  switch (kind) {
    case Certificate::Kind::SubSuperPair:
      return "sub_super_pair";
    case Certificate::Kind::CWBounds:
      return "cw_bounds";
    case Certificate::Kind::Indeterminate:
      return "indeterminate";
  }
  return "indeterminate";
}

UpperCwEstimate upper_cw_estimate(const MapModel& f, const Element& u, int k_max) {
  UpperCwEstimate out;
  out.bound = std::numeric_limits<double>::infinity();
  perturbed_power_iteration(f, u, k_max, [&](int k, double log_scale, double ratio) {
    CwStep step;
    step.k = k;
    step.root_bound = std::exp(log_scale / k) - 1.0;
    step.ratio_bound = ratio - 1.0;
    out.bound = std::min({out.bound, step.root_bound, step.ratio_bound});
    step.running_min = out.bound;
    out.steps.push_back(step);
    out.at_k_max = step.root_bound;
    return true;
  });
  return out;
}

ContractionTest strict_contraction_test(const MapModel& f, const Element& u, int k_max, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0,1)");
  ContractionTest out;
  const double log_slack = std::log1p(-delta);
  perturbed_power_iteration(f, u, k_max, [&](int k, double log_scale, double) {
    // M(z/u) = ||z||_u for z in the cone.
    if (log_scale <= log_slack + k * std::log(2.0)) {
      out.proven_at = k;
      out.bound = std::exp(log_scale / k) - 1.0;
      return false;
    }
    return true;
  });
  return out;
}

LowerCwEstimate lower_cw_estimate(const MapModel& f, const Element& u, const LowerCwOptions& opts) {
  LowerCwEstimate out;
  out.exact_recession = f.has_conjugate_recession();
  const MapModel g_inf = conjugate_recession_model(f, opts.schedule, opts.recession_tol);
  out.conjugate_upper = upper_cw_estimate(g_inf, u, opts.k_max).bound;
  out.value = out.conjugate_upper <= opts.zero_tol ? std::numeric_limits<double>::infinity()
                                                   : 1.0 / out.conjugate_upper;
  return out;
}

Certificate certify_bounded_fixed_set(const MapModel& f, const Element& u, const CertifyOptions& opts) {
  if (!(opts.delta > 0.0 && opts.delta < 1.0)) throw InvalidArgument("delta must lie in (0,1)");
  if (!in_interior(u)) throw DomainError("ray direction must be an interior point");

  Certificate cert;
  cert.delta = opts.delta;

  std::vector<int> exps;
  for (int j = opts.t_min_exp; j <= opts.t_max_exp; ++j) exps.push_back(j);
  std::stable_sort(exps.begin(), exps.end(), [](int a, int b) { return std::abs(a) < std::abs(b); });

  for (int j : exps) {
    const Element x = u * std::ldexp(1.0, j);
    double lo = 0.0;
    double hi = 0.0;
    try {
      std::tie(lo, hi) = ratio_bounds(f(x), x);
    } catch (const Error&) {
      continue;
    }
    if (!cert.x && lo >= 1.0 + opts.delta) {
      cert.x = x;
      cert.margin_x = lo - 1.0;
    }
    if (!cert.y && hi <= 1.0 - opts.delta) {
      cert.y = x;
      cert.margin_y = 1.0 - hi;
    }
    if (cert.x && cert.y) break;
  }
  if (cert.x && cert.y && min_ratio(*cert.y, *cert.x) > 1.0) {
    cert.kind = Certificate::Kind::SubSuperPair;
    return cert;
  }
  cert.x.reset();
  cert.y.reset();
  cert.margin_x = cert.margin_y = 0.0;

  try {
    const MapModel f_inf = recession_model(f, opts.schedule, opts.recession_tol);
    const MapModel g_inf = conjugate_recession_model(f, opts.schedule, opts.recession_tol);
    cert.upper_cw = upper_cw_estimate(f_inf, u, opts.k_max).bound;
    const double g_upper = upper_cw_estimate(g_inf, u, opts.k_max).bound;
    cert.lower_cw = g_upper > 0.0 ? 1.0 / g_upper : std::numeric_limits<double>::infinity();

    const ContractionTest kt = strict_contraction_test(f_inf, u, opts.k_max, opts.delta);
    const ContractionTest lt = strict_contraction_test(g_inf, u, opts.k_max, opts.delta);
    if (kt.proven() && lt.proven()) {
      cert.kind = Certificate::Kind::CWBounds;
      cert.k_witness = kt.proven_at;
      cert.l_witness = lt.proven_at;
    }
  } catch (const Error&) {
    cert.kind = Certificate::Kind::Indeterminate;
  }
  return cert;
}

CertificateCheck verify_certificate(const MapModel& f, const Certificate& cert) {
  CertificateCheck check;
  if (cert.kind != Certificate::Kind::SubSuperPair || !cert.x || !cert.y) return check;
  check.sub_ratio = min_ratio(f(*cert.x), *cert.x);
  check.super_ratio = max_ratio(f(*cert.y), *cert.y);
  check.order_ratio = min_ratio(*cert.y, *cert.x);
  check.sub_ok = check.sub_ratio >= 1.0 + cert.delta;
  check.super_ok = check.super_ratio <= 1.0 - cert.delta;
  check.ordered = check.order_ratio > 1.0;
  return check;
}

}  // namespace conefp
