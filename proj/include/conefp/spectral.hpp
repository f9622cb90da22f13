#ifndef CONEFP_SPECTRAL_HPP
#define CONEFP_SPECTRAL_HPP

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "conefp/maps.hpp"

namespace conefp {

/// Witness that a map f has a nonempty, bounded fixed-point set.
///
/// SubSuperPair: interior x, y with m(f(x)/x) >= 1 + margin_x and
/// M(f(y)/y) <= 1 - margin_y; then x << y and every fixed point lies in [x, y].
///
/// CWBounds: perturbed-power-iteration witnesses k, l proving r(f) < 1 (via
/// f_inf) and lambda(f) > 1 (via (L f L)_inf).
struct Certificate {
  enum class Kind { SubSuperPair, CWBounds, Indeterminate };
  Kind kind = Kind::Indeterminate;
  double delta = 0.0;
  std::optional<Element> x;
  std::optional<Element> y;
  double margin_x = 0.0;
  double margin_y = 0.0;
  double lower_cw = 0.0;
  double upper_cw = std::numeric_limits<double>::infinity();
  std::optional<int> k_witness;
  std::optional<int> l_witness;
};

std::string to_string(Certificate::Kind kind);

/// One row of the perturbed power iteration v_k = (f + id)^k(u).
struct CwStep {
  int k = 0;
  double root_bound = 0.0;   // ||v_k||_u^(1/k) - 1
  double ratio_bound = 0.0;  // M((f + id)(v_{k-1}) / v_{k-1}) - 1
  double running_min = 0.0;
};

struct UpperCwEstimate {
  double at_k_max = 0.0;  // ||(f + id)^k_max(u)||_u^(1/k_max) - 1
  double bound = 0.0;     // minimum over every per-k upper bound
  std::vector<CwStep> steps;
};

/// Upper Collatz-Wielandt number of a homogeneous order-preserving map
/// (closed-cone valued allowed) from the perturbed power iteration
/// (f + id)^k(u), rescaled each step by ||.||_u with the log-scale tracked
/// exactly. Every reported per-k value is an upper bound for r(f):
/// the k-th root, and the Collatz-Wielandt ratio of the current iterate.
UpperCwEstimate upper_cw_estimate(const MapModel& f, const Element& u, int k_max);

struct ContractionTest {
  std::optional<int> proven_at;  // first k with (f + id)^k(u) <= (1 - delta) 2^k u
  double bound = std::numeric_limits<double>::infinity();  // ||(f+id)^k(u)||_u^(1/k) - 1 at that k
  bool proven() const { return proven_at.has_value(); }
};

/// Searches k <= k_max with M((f + id)^k(u) / u) <= (1 - delta) 2^k. A hit
/// certifies r(f) < 1.
ContractionTest strict_contraction_test(const MapModel& f, const Element& u, int k_max,
                                        double delta = 1e-6);

struct LowerCwOptions {
  int k_max = 200;
  std::vector<double> schedule = default_recession_schedule();
  double recession_tol = 1e-9;
  /// r((L f L)_inf) at or below this is reported as zero (lambda = inf).
  double zero_tol = 1e-8;
};

struct LowerCwEstimate {
  double value = 0.0;            // estimate of lambda(f); +inf allowed
  double conjugate_upper = 0.0;  // estimate of r((L f L)_inf)
  bool exact_recession = false;
};

/// lambda(f) = 1 / r((L f L)_inf), with L the entrywise reciprocal (orthant)
/// or matrix inverse (PD).
LowerCwEstimate lower_cw_estimate(const MapModel& f, const Element& u, const LowerCwOptions& opts = {});

struct CertifyOptions {
  double delta = 1e-6;
  int t_min_exp = -20;  // ray scan over t = 2^j
  int t_max_exp = 20;
  int k_max = 200;
  std::vector<double> schedule = default_recession_schedule();
  double recession_tol = 1e-9;
};

/// Seeks a SubSuperPair on the ray {t u}; otherwise CW witnesses; otherwise
/// Indeterminate.
Certificate certify_bounded_fixed_set(const MapModel& f, const Element& u,
                                      const CertifyOptions& opts = {});

struct CertificateCheck {
  bool sub_ok = false;
  bool super_ok = false;
  bool ordered = false;
  double sub_ratio = 0.0;    // m(f(x)/x)
  double super_ratio = 0.0;  // M(f(y)/y)
  double order_ratio = 0.0;  // m(y/x)
  bool ok() const { return sub_ok && super_ok && ordered; }
};

/// f_inf as a closed-cone valued homogeneous model: the exact evaluator when
/// f carries one, f itself when f is homogeneous, else recession_estimate at
/// every evaluation.
MapModel recession_model(const MapModel& f, const std::vector<double>& schedule = default_recession_schedule(),
                         double tol = 1e-9);
/// (L f L)_inf, exact when available.
MapModel conjugate_recession_model(const MapModel& f,
                                   const std::vector<double>& schedule = default_recession_schedule(),
                                   double tol = 1e-9);

/// Re-checks a SubSuperPair certificate against f.
CertificateCheck verify_certificate(const MapModel& f, const Certificate& cert);

}  // namespace conefp

#endif  // CONEFP_SPECTRAL_HPP
