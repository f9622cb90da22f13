#ifndef CONEFP_IO_HPP
#define CONEFP_IO_HPP

#include <string>
#include <variant>

#include <json.hpp>

#include "conefp/riccati.hpp"

namespace conefp {

using Json = nlohmann::ordered_json;

/// Problem-file or point-file content that does not validate. The message
/// starts with the offending field path, e.g. "map.M[1][0]: expected a number".
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A parsed problem file:
///
///   {
///     "cone": "orthant" | "pd",
///     "dimension": n,
///     "map": {"type": "affine", "M": [[...]], "b": [...]}
///          | {"type": "perm_affine", "perm": [...], "b": [...]}
///          | {"type": "riccati", "A": H, "B": H, "N": H, "rank_tol": r},
///     "solver": {"alpha": a, "tol": t, "max_iter": k},
///     "certify": {"delta": d, "k_max": k, "t_min_exp": j0, "t_max_exp": j1}
///   }
///
/// Matrices are nested arrays of numbers, or {"re": [[...]], "im": [[...]]}
/// for complex entries. "b", "solver", "certify" and "rank_tol" are optional.
struct Problem {
  Cone cone;
  std::variant<AffineOrthantMap, PermutationAffineMap, RiccatiProblem> family;
  IterationConfig solver;
  CertifyOptions certify;

  std::string map_type() const;
  MapModel model() const;
  const RiccatiProblem* riccati() const { return std::get_if<RiccatiProblem>(&family); }
};

Problem parse_problem(const Json& doc);
Problem load_problem(const std::string& path);
Json load_json_file(const std::string& path);

/// A flat array is an orthant vector; a nested array or {"re","im"} object is
/// a Hermitian matrix.
Element parse_point(const Json& value, const std::string& where);

/// Matrix from a nested array or {"re": ..., "im": ...}.
CMatrix parse_matrix(const Json& value, const std::string& where);

/// Accepts numbers and the strings "inf", "-inf", "nan".
double parse_number(const Json& value, const std::string& where);

Json number_to_json(double v);
Json point_to_json(const Element& e);
Json certificate_to_json(const Certificate& cert);
Json solve_report_to_json(const SolveReport& rep);

/// Serializes with every floating-point number written at 17 significant
/// digits; non-finite values become the strings "inf", "-inf", "nan".
std::string dump_json(const Json& j, int indent = 2);

/// %.17g text; non-finite values as inf, -inf, nan.
std::string format_double(double v);

}  // namespace conefp

#endif  // CONEFP_IO_HPP
